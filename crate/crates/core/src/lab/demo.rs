use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cap_body, default_margin, inflation_search, CapBody, TangentFamily, DEFAULT_ARC_VERTICES};
use crate::error::{Error, Result};
use crate::geometry::{next_combination, Placement};
use crate::solver::alpha_reference;
use crate::rng;

/// Random `n`-subsets checked when there are more than `10^4` of them.
pub const DEMO_RANDOM_SUBSETS: usize = 512;
const EXHAUSTIVE_LIMIT: f64 = 1e4;
const FULL_FAMILY_EPS: f64 = 0.01;
const FULL_FAMILY_SLACK: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub n: usize,
    /// Smallest certified `delta2` over the checked subsets.
    pub delta: f64,
    pub subsets_checked: usize,
    pub full_family_beta: f64,
    pub verdict: Verdict,
    pub failing_subset: Option<Vec<usize>>,
    #[serde(skip)]
    pub body: Option<CapBody<f64>>,
    #[serde(skip)]
    pub family: Option<TangentFamily<f64>>,
    /// The subset attaining `delta` with its certified placement.
    #[serde(skip)]
    pub example: Option<(Vec<usize>, Placement<f64>)>,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

fn subsets(s: usize, n: usize, seed: u64) -> Vec<Vec<usize>> {
    if binomial(s, n) <= EXHAUSTIVE_LIMIT {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            out.push(idx.clone());
            if !next_combination(&mut idx, s) {
                return out;
            }
        }
    }
    let mut r = rng::stream(seed, 2);
    (0..DEMO_RANDOM_SUBSETS)
        .map(|_| {
            let mut v = rand::seq::index::sample(&mut r, s, n).into_vec();
            v.sort_unstable();
            v
        })
        .collect()
}

fn subset_seed(seed: u64, subset: &[usize]) -> u64 {
    subset.iter().fold(seed, |h, &i| rng::sub_seed(h, i as u64))
}

/// Builds the cap body for `n` and `sample_count` evenly spaced tangent
/// half-spaces, then checks that (a) every checked `n`-subset holds a copy
/// scaled by more than 1 and (b) the whole family holds no copy scaled by
/// more than `1 + 1e-3`.
pub fn lower_bound_demo(n: usize, sample_count: usize, seed: u64) -> Result<DemoReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("demo needs n >= 2".into()));
    }
    if sample_count < n {
        return Err(Error::InvalidParameter(format!("sample count {sample_count} is below n = {n}")));
    }
    let body = cap_body::<f64>(n, default_margin(n), DEFAULT_ARC_VERTICES)?;
    let family = TangentFamily::evenly_spaced(sample_count, 0.0)?;
    let subs = subsets(sample_count, n, seed);

    let outcomes: Vec<Result<(f64, Placement<f64>)>> = subs
        .par_iter()
        .map(|sub| {
            let fam = family.subset(sub)?;
            let inf = inflation_search(&body, &fam, subset_seed(seed, sub))?;
            Ok((inf.delta2, inf.placement))
        })
        .collect();
    let mut delta = f64::INFINITY;
    let mut failing_subset = None;
    let mut example = None;
    for (sub, out) in subs.iter().zip(outcomes) {
        match out {
            Ok((d, pl)) => {
                if d < delta {
                    delta = d;
                    example = Some((sub.clone(), pl));
                }
            }
            Err(Error::SearchFailed(_)) => {
                failing_subset = Some(sub.clone());
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let full_family_beta = alpha_reference(&body.polygon, &family.to_hpolytope()?, FULL_FAMILY_EPS, seed)?;
    let pass = failing_subset.is_none() && full_family_beta <= 1.0 + FULL_FAMILY_SLACK;
    Ok(DemoReport {
        n,
        delta: if delta.is_finite() { delta } else { 0.0 },
        subsets_checked: subs.len(),
        full_family_beta,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        failing_subset,
        body: Some(body),
        family: Some(family),
        example,
    })
}
