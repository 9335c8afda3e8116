use std::time::Instant;

use rayon::prelude::*;

use super::eval::{evaluate, prune};
use super::{beta_direct, check_instance, finish, FitResult, Method, Stats};
use crate::error::{Error, Result};
use crate::fit_lp::LpStatus;
use crate::geometry::{next_combination, HPolytope, VPolytope};
use crate::rotation_net::RotationNet;
use crate::Scalar;

/// Largest number of subsets [`beta_brute`] will enumerate.
pub const BRUTE_LIMIT: f64 = 1e6;

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Ordering key for subset values: empty intersections sort below every
/// feasible value.
fn key<S: Scalar>(status: LpStatus, beta: S) -> S {
    match status {
        LpStatus::Infeasible => S::neg_infinity(),
        _ => beta,
    }
}

fn combinations(n: usize, k: usize, chunk: usize, mut f: impl FnMut(Vec<Vec<usize>>) -> Result<bool>) -> Result<()> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf = Vec::with_capacity(chunk);
    loop {
        buf.push(idx.clone());
        let more = next_combination(&mut idx, n);
        if buf.len() == chunk || !more {
            if !f(std::mem::take(&mut buf))? {
                return Ok(());
            }
        }
        if !more {
            return Ok(());
        }
    }
}

/// Minimum of `beta` over all `t (d + 1)`-subsets of `P`. Refuses when there
/// are more than [`BRUTE_LIMIT`] subsets.
pub fn beta_brute<S: Scalar>(k: &VPolytope<S>, net: &RotationNet<S>, p: &HPolytope<S>) -> Result<FitResult<S>> {
    check_instance(k, net, p)?;
    let seed = 0;
    let n = p.len();
    let delta = net.basis_bound();
    if n <= delta {
        let mut r = beta_direct(k, net, p, seed)?;
        r.method = Method::Brute;
        r.stats.subsets_checked = 1;
        return Ok(r);
    }
    let count = binomial(n, delta);
    if count > BRUTE_LIMIT {
        return Err(Error::Refused { n, k: delta, count, limit: BRUTE_LIMIT });
    }
    let start = Instant::now();
    let mut stats = Stats::default();
    let t = net.len() as u64;

    let mut best = S::infinity();
    combinations(n, delta, 4096, |batch| {
        let vals: Vec<S> = batch
            .par_iter()
            .map(|sub| {
                let ev = evaluate(k, net, p, sub, seed, false, &mut Stats::default())?;
                Ok(key(ev.status, ev.beta))
            })
            .collect::<Result<_>>()?;
        stats.lp_calls += t * batch.len() as u64;
        stats.subsets_checked += batch.len() as u64;
        best = vals.into_iter().fold(best, S::min);
        Ok(true)
    })?;

    // the first minimizing subset whose placement is feasible for all of P
    let tie = if best.is_finite() { S::pivot_tol() * S::one().max(best.abs()) } else { S::zero() };
    let mut found = None;
    combinations(n, delta, 256, |batch| {
        for sub in batch {
            let ev = evaluate(k, net, p, &sub, seed, true, &mut stats)?;
            let v = key(ev.status, ev.beta);
            if !(v <= best + tie) {
                continue;
            }
            let ok = ev.status == LpStatus::Infeasible || ev.placement().fits_in(k, p, S::feas_tol())?;
            if ok {
                found = Some((sub, ev));
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    match found {
        Some((sub, ev)) => {
            let (basis, _) = prune(k, net, p, &sub, ev.clone(), seed, &mut stats)?;
            Ok(finish(&ev, basis, Method::Brute, stats, start))
        }
        None => {
            let mut r = beta_direct(k, net, p, seed)?;
            r.method = Method::Brute;
            r.beta = best;
            r.stats.lp_calls += stats.lp_calls;
            r.stats.subsets_checked = stats.subsets_checked;
            r.stats.fallback = true;
            r.stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(r)
        }
    }
}
