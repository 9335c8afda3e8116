//! `beta(K, P) = max_i beta_i(K, P)` over a rotation net, computed three
//! ways, plus the witnessing basis of at most `t (d + 1)` half-spaces.

mod brute;
mod eval;
mod msw;

pub use brute::{beta_brute, BRUTE_LIMIT};
pub use msw::beta_msw;

use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::fit_lp::LpStatus;
use crate::geometry::{HPolytope, Placement, VPolytope};
use crate::rotation_net::{build_net_2d, RotationNet};
use crate::Scalar;
use eval::{evaluate, prune};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Msw,
    Brute,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Msw => "msw",
            Method::Brute => "brute",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "msw" => Ok(Method::Msw),
            "brute" => Ok(Method::Brute),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    /// Fixed-rotation LP solves.
    pub lp_calls: u64,
    pub violation_tests: u64,
    pub basis_updates: u64,
    pub subsets_checked: u64,
    pub wall_time_ms: f64,
    /// Set when the randomized search hit its depth guard and the result
    /// came from the direct sweep.
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct FitResult<S> {
    /// `+inf` (JSON `null`) when the scale is unbounded, `0` when `P` is empty.
    #[serde(serialize_with = "ser_beta", deserialize_with = "de_beta")]
    pub beta: S,
    pub status: LpStatus,
    pub placement: Placement<S>,
    /// Index of the winning rotation in the net.
    pub rotation_index: usize,
    /// Half-space indices of `P` that alone reproduce `beta` and the placement.
    pub basis: Vec<usize>,
    pub method: Method,
    pub stats: Stats,
    /// True when the placement refers to the mirror image of `K`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reflected: bool,
}

fn ser_beta<S: Scalar, Z: Serializer>(v: &S, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    if v.is_finite() {
        v.serialize(s)
    } else {
        s.serialize_none()
    }
}

fn de_beta<'de, S: Scalar, D: Deserializer<'de>>(d: D) -> std::result::Result<S, D::Error> {
    Ok(Option::<S>::deserialize(d)?.unwrap_or_else(S::infinity))
}

impl<S: Scalar> FitResult<S> {
    pub fn is_infeasible(&self) -> bool {
        self.status == LpStatus::Infeasible
    }
}

pub(crate) fn check_instance<S: Scalar>(k: &VPolytope<S>, net: &RotationNet<S>, p: &HPolytope<S>) -> Result<()> {
    check_dim(k.dim(), net.dim())?;
    check_dim(k.dim(), p.dim())
}

fn finish<S: Scalar>(
    ev: &eval::Eval<S>,
    basis: Vec<usize>,
    method: Method,
    mut stats: Stats,
    start: Instant,
) -> FitResult<S> {
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    FitResult {
        beta: ev.beta,
        status: ev.status,
        placement: ev.placement().clone(),
        rotation_index: ev.winner,
        basis,
        method,
        stats,
        reflected: false,
    }
}

/// Solves every rotation's LP over all of `P`; the lowest-index rotation
/// among (near-)ties wins.
pub fn beta_direct<S: Scalar>(k: &VPolytope<S>, net: &RotationNet<S>, p: &HPolytope<S>, seed: u64) -> Result<FitResult<S>> {
    check_instance(k, net, p)?;
    let start = Instant::now();
    let mut stats = Stats::default();
    let all: Vec<usize> = (0..p.len()).collect();
    let ev = evaluate(k, net, p, &all, seed, true, &mut stats)?;
    let (basis, _) = prune(k, net, p, &all, ev.clone(), seed, &mut stats)?;
    Ok(finish(&ev, basis, Method::Direct, stats, start))
}

/// Dispatches on `method`.
pub fn solve<S: Scalar>(
    method: Method,
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    seed: u64,
) -> Result<FitResult<S>> {
    match method {
        Method::Direct => beta_direct(k, net, p, seed),
        Method::Msw => beta_msw(k, net, p, seed),
        Method::Brute => beta_brute(k, net, p),
    }
}

/// Minimal subfamily of `P` reproducing `result`: the union of each
/// rotation's tight half-spaces, greedily thinned while the winning rotation
/// and placement stay the same.
pub fn extract_basis<S: Scalar>(
    result: &FitResult<S>,
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    seed: u64,
) -> Result<Vec<usize>> {
    check_instance(k, net, p)?;
    let mut stats = Stats::default();
    let all: Vec<usize> = (0..p.len()).collect();
    let ev = evaluate(k, net, p, &all, seed, true, &mut stats)?;
    let same = ev.status == result.status
        && (ev.beta == result.beta || (ev.beta - result.beta).abs() <= S::feas_tol() * S::one().max(ev.beta.abs()));
    if !same {
        return Err(Error::InvalidParameter("result was not computed for this instance".into()));
    }
    Ok(prune(k, net, p, &all, ev, seed, &mut stats)?.0)
}

/// `beta` restricted to the half-spaces in `indices`.
pub fn beta_on_subset<S: Scalar>(
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    indices: &[usize],
    seed: u64,
) -> Result<S> {
    check_instance(k, net, p)?;
    if let Some(&bad) = indices.iter().find(|&&i| i >= p.len()) {
        return Err(Error::InvalidParameter(format!("half-space index {bad} out of range")));
    }
    Ok(evaluate(k, net, p, indices, seed, false, &mut Stats::default())?.beta)
}

/// Reference value for `alpha(K, P)`: `beta` over the planar net built at
/// `fine_eps`, which lies in `[(1 - fine_eps) alpha, alpha]`.
pub fn alpha_reference<S: Scalar>(k: &VPolytope<S>, p: &HPolytope<S>, fine_eps: S, seed: u64) -> Result<S> {
    check_dim(2, k.dim())?;
    let net = build_net_2d(k, fine_eps)?;
    let all: Vec<usize> = (0..p.len()).collect();
    check_instance(k, &net, p)?;
    Ok(evaluate(k, &net, p, &all, seed, false, &mut Stats::default())?.beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Rotation};
    use crate::rotation_net::Certificate;
    use std::f64::consts::PI;

    fn square() -> VPolytope<f64> {
        VPolytope::new(
            2,
            vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), Point::xy(1.0, 1.0), Point::xy(0.0, 1.0)],
        )
        .unwrap()
    }

    fn angle_net(angles: &[f64]) -> RotationNet<f64> {
        RotationNet::new(angles.iter().map(|a| Rotation::planar(*a)).collect(), 0.1, Certificate::VerifiedSampling)
            .unwrap()
    }

    #[test]
    fn identity_net_in_big_square() {
        let p = HPolytope::aabb(&[0.0, 0.0], &[3.0, 3.0]).unwrap();
        let r = beta_direct(&square(), &angle_net(&[0.0]), &p, 0).unwrap();
        assert!((r.beta - 3.0).abs() < 1e-9);
        assert!(r.basis.len() <= 3);
    }

    #[test]
    fn quarter_turns_pick_lowest_index() {
        let p = HPolytope::aabb(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let net = angle_net(&[PI / 2.0, PI, 1.5 * PI, 2.0 * PI]);
        let r = beta_direct(&square(), &net, &p, 0).unwrap();
        assert!((r.beta - 1.0).abs() < 1e-9);
        assert_eq!(r.rotation_index, 0);
        assert!(r.placement.fits_in(&square(), &p, 1e-9).unwrap());
    }

    #[test]
    fn fine_net_matches_closed_form() {
        let p = HPolytope::aabb(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let angles: Vec<f64> = (1..=32).map(|j| PI / 16.0 * j as f64 + 0.05).collect();
        let r = beta_direct(&square(), &angle_net(&angles), &p, 0).unwrap();
        let want = angles
            .iter()
            .map(|a| {
                let f = a.rem_euclid(PI / 2.0);
                1.0 / (f.cos() + f.sin())
            })
            .fold(f64::MIN, f64::max);
        assert!((r.beta - want).abs() < 1e-9, "{} vs {}", r.beta, want);
    }

    #[test]
    fn empty_container_is_flagged() {
        let p = HPolytope::aabb(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let r = beta_direct(&square(), &angle_net(&[0.0, 1.0]), &p, 0).unwrap();
        assert!(r.is_infeasible());
        assert_eq!(r.beta, 0.0);
        assert!(r.basis.len() <= 3);
        let sub = p.subset(&r.basis).unwrap();
        assert!(beta_direct(&square(), &angle_net(&[0.0, 1.0]), &sub, 0).unwrap().is_infeasible());
    }

    #[test]
    fn single_halfspace_basis() {
        let p = HPolytope::new(2, vec![crate::geometry::HalfSpace::new(Point::xy(1.0, 0.0), 1.0).unwrap()]).unwrap();
        let r = beta_direct(&square(), &angle_net(&[0.0]), &p, 0).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        assert!(r.basis.iter().all(|&i| i == 0));
        let sub = beta_on_subset(&square(), &angle_net(&[0.0]), &p, &r.basis, 0).unwrap();
        assert!(sub.is_infinite());
    }

    fn tangent_family(n: usize, seed: u64) -> HPolytope<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let hs = (0..n)
            .map(|_| crate::geometry::HalfSpace::tangent(&Point::polar(rng.random_range(0.0..2.0 * PI))).unwrap())
            .collect();
        HPolytope::new(2, hs).unwrap()
    }

    fn triangle() -> VPolytope<f64> {
        VPolytope::regular_polygon(3, 1.0, 0.0).unwrap()
    }

    #[test]
    fn three_methods_agree() {
        let net = angle_net(&[0.0, 2.0]);
        for seed in 0..6 {
            let p = tangent_family(12, seed);
            let d = beta_direct(&triangle(), &net, &p, 1).unwrap();
            let m = beta_msw(&triangle(), &net, &p, seed).unwrap();
            let b = beta_brute(&triangle(), &net, &p).unwrap();
            assert_eq!(d.status, m.status);
            if d.beta.is_finite() {
                assert!((d.beta - m.beta).abs() <= 1e-9 * d.beta.max(1.0), "{} {}", d.beta, m.beta);
                assert!((d.beta - b.beta).abs() <= 1e-9 * d.beta.max(1.0), "{} {}", d.beta, b.beta);
            }
            assert!(m.basis.len() <= net.basis_bound());
            let again = beta_on_subset(&triangle(), &net, &p, &m.basis, 0).unwrap();
            assert!((again - m.beta).abs() <= 1e-9 * m.beta.max(1.0));
        }
    }

    #[test]
    fn brute_refuses_large_families() {
        let net = angle_net(&[0.0, 1.0, 2.0, 3.0]);
        let p = tangent_family(60, 3);
        match beta_brute(&triangle(), &net, &p) {
            Err(Error::Refused { n, k, .. }) => assert_eq!((n, k), (60, 12)),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn method_parses() {
        assert_eq!("msw".parse::<Method>().unwrap(), Method::Msw);
        assert!("simplex".parse::<Method>().is_err());
    }

    #[test]
    fn unbounded_beta_serializes_as_null() {
        let p = HPolytope::new(2, vec![crate::geometry::HalfSpace::new(Point::xy(1.0, 0.0), 1.0).unwrap()]).unwrap();
        let r = beta_direct(&square(), &angle_net(&[0.0]), &p, 0).unwrap();
        let js = serde_json::to_value(&r).unwrap();
        assert!(js["beta"].is_null());
        let back: FitResult<f64> = serde_json::from_value(js).unwrap();
        assert!(back.beta.is_infinite());
    }
}
