//! Finite rotation nets: rotations `A_1, ..., A_t` such that every rotated
//! copy `DK` contains a translate of `(1 - eps) A_i K` for some `i`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{check_dim, Error, Result};
use crate::fit_lp::{beta_fixed_rotation, chebyshev_inradius};
use crate::geometry::{normalize_to_unit_ball, random_rotation_with, HPolytope, Rotation, VPolytope};
use crate::{rng, Scalar};

/// How the net property was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// Planar net from the largest certified rotation angle.
    #[serde(rename = "exact_2d")]
    Exact2d,
    /// Operator-norm covering radius below `eps * r / R`.
    #[serde(rename = "sufficient_bound")]
    SufficientBound,
    /// Only checked on random rotations.
    #[serde(rename = "verified_sampling")]
    VerifiedSampling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct RotationNet<S> {
    epsilon: S,
    certificate: Certificate,
    rotations: Vec<Rotation<S>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape_hash: Option<String>,
}

impl<S: Scalar> RotationNet<S> {
    pub fn new(rotations: Vec<Rotation<S>>, epsilon: S, certificate: Certificate) -> Result<Self> {
        let net = RotationNet { epsilon, certificate, rotations, shape_hash: None };
        net.validate()?;
        Ok(net)
    }

    pub fn with_shape_hash(mut self, hash: String) -> Self {
        self.shape_hash = Some(hash);
        self
    }

    /// Checks the structural invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        let first = self.rotations.first().ok_or(Error::Empty("rotation net has no rotations"))?;
        if !(self.epsilon >= S::zero() && self.epsilon < S::one()) {
            return Err(Error::InvalidParameter("net epsilon must lie in [0, 1)".into()));
        }
        for r in &self.rotations {
            check_dim(first.dim(), r.dim())?;
            r.check(S::lit(1e-10).max(S::feas_tol()))?;
        }
        Ok(())
    }

    pub fn rotations(&self) -> &[Rotation<S>] {
        &self.rotations
    }

    pub fn epsilon(&self) -> S {
        self.epsilon
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn shape_hash(&self) -> Option<&str> {
        self.shape_hash.as_deref()
    }

    /// Number of rotations `t`.
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rotations[0].dim()
    }

    /// Combinatorial dimension `t (d + 1)` of the fitting problem over this net.
    pub fn basis_bound(&self) -> usize {
        self.len() * (self.dim() + 1)
    }
}

/// SHA-256 of the unit-ball-normalized vertex coordinates.
pub fn shape_hash<S: Scalar>(k: &VPolytope<S>) -> Result<String> {
    let (kn, _) = normalize_to_unit_ball(k)?;
    let mut h = Sha256::new();
    h.update((kn.dim() as u64).to_le_bytes());
    for v in kn.vertices() {
        for c in v.coords() {
            h.update(c.as_f64().to_le_bytes());
        }
    }
    Ok(hex::encode(h.finalize()))
}

fn check_epsilon<S: Scalar>(epsilon: S, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { epsilon >= S::zero() } else { epsilon > S::zero() };
    if ok && epsilon < S::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("epsilon must lie in {}0, 1), got {epsilon}", if allow_zero { "[" } else { "(" })))
    }
}

/// Largest `alpha` such that `(1 - eps) R_theta K` has a translate strictly
/// inside `K` for every `theta` in `[-alpha, alpha]`, capped at `pi`.
///
/// A coarse angle grid is walked outward on both sides; discrete local minima
/// of the slack are refined by golden-section search and the first failure is
/// bisected down to `tol`.
pub fn max_angle_2d<S: Scalar>(k: &VPolytope<S>, epsilon: S, tol: S) -> Result<S> {
    check_dim(2, k.dim())?;
    check_epsilon(epsilon, true)?;
    if !(tol > S::zero()) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    k.check_full_dimensional()?;
    let h = k.to_hpolytope()?;
    let probe = SlackProbe { k, h: &h, target: S::one() - epsilon, margin: S::strict_margin() };
    if !probe.passes(probe.slack(S::zero())?) {
        return Ok(S::zero());
    }
    let up = probe.side_limit(S::one(), tol)?;
    let down = probe.side_limit(-S::one(), tol)?;
    Ok(up.min(down))
}

struct SlackProbe<'a, S> {
    k: &'a VPolytope<S>,
    h: &'a HPolytope<S>,
    target: S,
    margin: S,
}

impl<S: Scalar> SlackProbe<'_, S> {
    fn slack(&self, theta: S) -> Result<S> {
        Ok(beta_fixed_rotation(self.k, &Rotation::planar(theta), self.h, 0)?.value - self.target)
    }

    fn passes(&self, g: S) -> bool {
        g > self.margin
    }

    /// Largest certified `|theta|` on one side (`sign = +-1`).
    fn side_limit(&self, sign: S, tol: S) -> Result<S> {
        let pi = S::PI();
        let step = S::lit(1e-3).min(pi / S::lit(16.0));
        let n = (pi / step).ceil().to_usize().unwrap_or(1).max(1);
        let angle = |j: usize| if j >= n { pi } else { S::from_usize(j) * step };
        let mut vals: Vec<S> = vec![self.slack(S::zero())?];
        let block = 64;
        let mut fail_at = None;
        while fail_at.is_none() && vals.len() <= n {
            let lo = vals.len();
            let hi = (lo + block).min(n + 1);
            let chunk: Vec<S> =
                (lo..hi).into_par_iter().map(|j| self.slack(sign * angle(j))).collect::<Result<_>>()?;
            for g in chunk {
                if fail_at.is_none() && !self.passes(g) {
                    fail_at = Some(vals.len());
                }
                vals.push(g);
            }
        }
        let last = fail_at.unwrap_or(n);
        // a dip between grid points can hide a failure
        for j in 1..last.min(vals.len() - 1) {
            if vals[j] <= vals[j - 1] && vals[j] <= vals[j + 1] {
                let (t, g) = self.golden_min(sign * angle(j - 1), sign * angle(j + 1))?;
                if !self.passes(g) {
                    return self.bisect(sign * angle(j - 1), t, tol);
                }
            }
        }
        match fail_at {
            Some(f) => self.bisect(sign * angle(f - 1), sign * angle(f), tol),
            None => Ok(pi),
        }
    }

    fn golden_min(&self, a: S, b: S) -> Result<(S, S)> {
        let r = (S::lit(5.0).sqrt() - S::one()) / S::lit(2.0);
        let (mut a, mut b) = (a, b);
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let mut gc = self.slack(c)?;
        let mut gd = self.slack(d)?;
        for _ in 0..60 {
            if !self.passes(gc) {
                return Ok((c, gc));
            }
            if !self.passes(gd) {
                return Ok((d, gd));
            }
            if (b - a).abs() <= S::lit(1e-12) {
                break;
            }
            if gc < gd {
                b = d;
                d = c;
                gd = gc;
                c = b - r * (b - a);
                gc = self.slack(c)?;
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + r * (b - a);
                gd = self.slack(d)?;
            }
        }
        Ok(if gc < gd { (c, gc) } else { (d, gd) })
    }

    /// `good` passes and `bad` fails; returns `|good|` after shrinking the gap to `tol`.
    fn bisect(&self, good: S, bad: S, tol: S) -> Result<S> {
        let (mut good, mut bad) = (good, bad);
        while (bad - good).abs() > tol {
            let mid = (good + bad) / S::lit(2.0);
            if mid == good || mid == bad {
                break;
            }
            if self.passes(self.slack(mid)?) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        Ok(good.abs())
    }
}

fn planar_grid<S: Scalar>(t: usize) -> Vec<Rotation<S>> {
    (1..=t).map(|j| Rotation::planar(S::TAU() * S::from_usize(j) / S::from_usize(t))).collect()
}

/// Planar net: `t = ceil(pi / alpha)` rotations by `2 pi j / t`, where
/// `alpha = max_angle_2d(K, eps)`.
pub fn build_net_2d<S: Scalar>(k: &VPolytope<S>, epsilon: S) -> Result<RotationNet<S>> {
    check_dim(2, k.dim())?;
    check_epsilon(epsilon, false)?;
    let alpha = max_angle_2d(k, epsilon, S::feas_tol())?;
    if !(alpha > S::zero()) {
        return Err(Error::SearchFailed(format!("no positive rotation angle is certified at epsilon {epsilon}")));
    }
    // the slack absorbs the bisection tolerance when pi / alpha is an integer
    let t = (S::PI() / alpha - S::lit(1e-5)).ceil().to_usize().unwrap_or(1).max(1);
    Ok(RotationNet::new(planar_grid(t), epsilon, Certificate::Exact2d)?.with_shape_hash(shape_hash(k)?))
}

/// Largest net size [`build_net_sufficient`] will produce.
pub const MAX_SUFFICIENT_NET: usize = 2_000_000;

/// Net with operator-norm covering radius at most `eps * r / R`, where `r`
/// is the inradius of `K` and `R` its circumradius about the same center.
pub fn build_net_sufficient<S: Scalar>(k: &VPolytope<S>, epsilon: S, d: usize) -> Result<RotationNet<S>> {
    check_dim(d, k.dim())?;
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension { dim: d, reason: "sufficient nets are built for d = 2 and d = 3" });
    }
    check_epsilon(epsilon, false)?;
    k.check_full_dimensional()?;
    let inr = chebyshev_inradius(&k.to_hpolytope()?)?;
    if !(inr.radius > S::zero()) {
        return Err(Error::Degenerate("body has no interior".into()));
    }
    let outer = k.vertices().iter().map(|v| v.distance(&inr.center)).fold(S::zero(), S::max);
    let rho = epsilon * inr.radius / outer;
    let rotations = if d == 2 {
        let spacing = S::lit(2.0) * (rho / S::lit(2.0)).asin();
        let t = (S::TAU() / spacing).ceil().to_usize().unwrap_or(usize::MAX);
        if t > MAX_SUFFICIENT_NET {
            return Err(Error::InvalidParameter(format!("net would need {t} rotations")));
        }
        planar_grid(t)
    } else {
        quaternion_grid(rho)?
    };
    Ok(RotationNet::new(rotations, epsilon, Certificate::SufficientBound)?.with_shape_hash(shape_hash(k)?))
}

/// Cell centers of an `N^3` grid on each of the four cube faces `q_i = 1`,
/// projected to unit quaternions. Chordal covering radius is `sqrt(3) / N`
/// and the rotation map at most doubles it in operator norm.
fn quaternion_grid<S: Scalar>(rho: S) -> Result<Vec<Rotation<S>>> {
    let n = (S::lit(2.0) * S::lit(3.0).sqrt() / rho).ceil().to_usize().unwrap_or(usize::MAX);
    let count = n.saturating_mul(n).saturating_mul(n).saturating_mul(4);
    if count > MAX_SUFFICIENT_NET {
        return Err(Error::InvalidParameter(format!("net would need {count} rotations")));
    }
    let coord = |i: usize| -S::one() + S::from_usize(2 * i + 1) / S::from_usize(n);
    let mut out = Vec::with_capacity(count);
    for face in 0..4 {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let free = [coord(a), coord(b), coord(c)];
                    let mut q = [S::zero(); 4];
                    let mut f = free.iter();
                    for (slot, v) in q.iter_mut().enumerate() {
                        *v = if slot == face { S::one() } else { *f.next().expect("three free coordinates") };
                    }
                    out.push(Rotation::from_quaternion(q));
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of checking the net property on a set of rotations `D`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetReport<S> {
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    /// Smallest `beta - (1 - eps)` over trials, taken at the accepted net element.
    pub worst_margin: S,
    pub failing_trials: Vec<usize>,
}

impl<S> NetReport<S> {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

/// Samples `trials` Haar rotations `D` and checks that some `(1 - eps) A_i K`
/// has a translate inside `DK`.
pub fn verify_net<S: Scalar>(net: &RotationNet<S>, k: &VPolytope<S>, trials: usize, seed: u64) -> Result<NetReport<S>> {
    let mut rng = rng::stream(seed, 0);
    let ds = (0..trials).map(|_| random_rotation_with(k.dim(), &mut rng)).collect::<Result<Vec<_>>>()?;
    verify_net_against(net, k, &ds)
}

/// [`verify_net`] on caller-chosen rotations.
pub fn verify_net_against<S: Scalar>(net: &RotationNet<S>, k: &VPolytope<S>, ds: &[Rotation<S>]) -> Result<NetReport<S>> {
    check_dim(net.dim(), k.dim())?;
    let h = k.to_hpolytope()?;
    let target = S::one() - net.epsilon();
    let outcomes: Vec<(bool, S)> = ds
        .par_iter()
        .map(|d| {
            check_dim(k.dim(), d.dim())?;
            let hd = h.rotate(d);
            let mut order: Vec<(S, usize)> =
                net.rotations().iter().enumerate().map(|(i, a)| (a.frobenius_distance(d), i)).collect();
            order.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal).then(x.1.cmp(&y.1)));
            let mut best = S::neg_infinity();
            for (_, i) in order {
                let margin = beta_fixed_rotation(k, &net.rotations()[i], &hd, 0)?.value - target;
                if margin >= -S::feas_tol() {
                    return Ok((true, margin));
                }
                best = best.max(margin);
            }
            Ok((false, best))
        })
        .collect::<Result<_>>()?;
    let failing_trials: Vec<usize> = outcomes.iter().enumerate().filter(|(_, o)| !o.0).map(|(i, _)| i).collect();
    Ok(NetReport {
        trials: ds.len(),
        passes: ds.len() - failing_trials.len(),
        failures: failing_trials.len(),
        worst_margin: outcomes.iter().map(|o| o.1).fold(S::infinity(), S::min),
        failing_trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn square() -> VPolytope<f64> {
        VPolytope::new(
            2,
            vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), Point::xy(1.0, 1.0), Point::xy(0.0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn square_angle_matches_closed_form() {
        let eps = 1.0 - 1.0 / 2f64.sqrt();
        let a = max_angle_2d(&square(), eps, 1e-9).unwrap();
        assert!((a - FRAC_PI_4).abs() < 1e-6, "alpha = {a}");
    }

    #[test]
    fn zero_epsilon_gives_zero_angle() {
        let tri = VPolytope::regular_polygon(3, 1.0, 0.0).unwrap();
        assert_eq!(max_angle_2d(&tri, 0.0, 1e-9).unwrap(), 0.0);
        assert!(max_angle_2d(&tri, 1.0, 1e-9).is_err());
        assert!(max_angle_2d(&tri, -0.1, 1e-9).is_err());
    }

    #[test]
    fn square_net_has_four_quarter_turns() {
        let net = build_net_2d(&square(), 1.0 - 1.0 / 2f64.sqrt()).unwrap();
        assert_eq!(net.len(), 4);
        assert_eq!(net.certificate(), Certificate::Exact2d);
        for (j, r) in net.rotations().iter().enumerate() {
            let want = PI / 2.0 * (j + 1) as f64;
            assert!(r.op_distance(&Rotation::planar(want)) < 1e-9);
        }
    }

    #[test]
    fn sufficient_planar_count() {
        let k = VPolytope::regular_polygon(512, 1.0, 0.0).unwrap();
        let net = build_net_sufficient(&k, 0.1, 2).unwrap();
        assert_eq!(net.len(), 63);
        assert!(build_net_sufficient(&k, 0.1, 4).is_err());
    }

    #[test]
    fn thin_rectangle_failure_is_flagged() {
        let k = VPolytope::new(
            2,
            vec![Point::xy(0.0, 0.0), Point::xy(10.0, 0.0), Point::xy(10.0, 1.0), Point::xy(0.0, 1.0)],
        )
        .unwrap();
        let net = RotationNet::new(vec![Rotation::identity(2)], 0.01, Certificate::VerifiedSampling).unwrap();
        let rep = verify_net_against(&net, &k, &[Rotation::planar(PI / 2.0)]).unwrap();
        assert_eq!(rep.failures, 1);
        assert!(rep.worst_margin < -0.5);
    }

    #[test]
    fn shape_hash_distinguishes_shapes() {
        let a = shape_hash(&square()).unwrap();
        assert_eq!(a.len(), 64);
        assert_eq!(a, shape_hash(&square()).unwrap());
        let tri = VPolytope::regular_polygon(3, 1.0, 0.0).unwrap();
        assert_ne!(a, shape_hash(&tri).unwrap());
    }
}
