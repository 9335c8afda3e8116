//! Planar constructions showing that no fixed subfamily size certifies an
//! unshrunk rotated copy: cap bodies, tangent half-space families, random
//! rotations avoiding a point set, and inflated copies inside `n` tangent
//! half-spaces.

mod demo;

pub use demo::{lower_bound_demo, DemoReport, Verdict, DEMO_RANDOM_SUBSETS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit_lp::{fit_check, fixed_rotation_instance, seidel_lp, LpStatus};
use crate::geometry::{cap_measure_2d, ArcBody, ArcSet, Body, Cap, HPolytope, HalfSpace, Placement, Point, Rotation, VPolytope};
use crate::{rng, Scalar};

/// Vertices placed in the interior of the retained arc by default.
pub const DEFAULT_ARC_VERTICES: usize = 128;

/// Unit disk minus an open cap, with its inscribed polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct CapBody<S> {
    pub arc: ArcBody<S>,
    pub polygon: VPolytope<S>,
}

impl<S: Scalar> CapBody<S> {
    pub fn from_arc(arc: ArcBody<S>, m: usize) -> Result<Self> {
        if !(arc.removed_width < S::PI()) {
            return Err(Error::InvalidParameter("removed width must be below pi".into()));
        }
        Ok(CapBody { polygon: arc.discretize(m)?, arc })
    }

    pub fn removed_center_angle(&self) -> S {
        self.arc.removed_center_angle
    }

    pub fn removed_width(&self) -> S {
        self.arc.removed_width
    }

    pub fn body(&self) -> Body<S> {
        Body::Arc(self.arc)
    }

    /// `mu(K ∩ S^1) = (2 pi - w) / (2 pi)`.
    pub fn retained_measure(&self) -> S {
        S::one() - self.arc.removed_width / S::TAU()
    }

    /// Retained measure inside the half-circle centered on the removed arc.
    pub fn half_circle_measure(&self) -> Result<S> {
        cap_measure_2d(&self.body(), &Cap::at_angle(self.arc.removed_center_angle, S::zero()))
    }
}

/// Cap body with removed width `w = pi - 2 pi / n + margin`, centered at
/// angle `pi / 2`, discretized with `m` interior arc vertices.
pub fn cap_body<S: Scalar>(n: usize, margin: S, m: usize) -> Result<CapBody<S>> {
    if n < 2 {
        return Err(Error::InvalidParameter("cap body needs n >= 2".into()));
    }
    if !(margin > S::zero()) {
        return Err(Error::InvalidParameter("margin must be positive".into()));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one interior arc vertex".into()));
    }
    let w = S::PI() - S::TAU() / S::from_usize(n) + margin;
    if w >= S::TAU() {
        return Err(Error::InvalidParameter(format!("removed width {} is at least 2 pi", w.as_f64())));
    }
    CapBody::from_arc(ArcBody::new(S::FRAC_PI_2(), w)?, m)
}

/// Default margin `pi / (2 n)`.
pub fn default_margin<S: Scalar>(n: usize) -> S {
    S::PI() / S::from_usize(2 * n)
}

/// Half-spaces `<x, u_j> <= 1` tangent to the unit circle at `u_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFamily<S> {
    contact_points: Vec<Point<S>>,
    halfspaces: Vec<HalfSpace<S>>,
}

impl<S: Scalar> TangentFamily<S> {
    pub fn from_points(points: Vec<Point<S>>) -> Result<Self> {
        let halfspaces: Vec<HalfSpace<S>> = points.iter().map(HalfSpace::tangent).collect::<Result<_>>()?;
        let contact_points = halfspaces.iter().map(|h| h.normal().clone()).collect();
        Ok(TangentFamily { contact_points, halfspaces })
    }

    pub fn from_angles(angles: &[S]) -> Result<Self> {
        Self::from_points(angles.iter().map(|&a| Point::polar(a)).collect())
    }

    pub fn evenly_spaced(s: usize, phase: S) -> Result<Self> {
        let step = S::TAU() / S::from_usize(s.max(1));
        let angles: Vec<S> = (0..s).map(|j| phase + step * S::from_usize(j)).collect();
        Self::from_angles(&angles)
    }

    /// `s` contact points drawn uniformly from the circle.
    pub fn random(s: usize, seed: u64) -> Result<Self> {
        let mut r = rng::stream(seed, 0);
        let angles: Vec<S> = (0..s).map(|_| S::TAU() * S::sample_unit(&mut r)).collect();
        Self::from_angles(&angles)
    }

    pub fn contact_points(&self) -> &[Point<S>] {
        &self.contact_points
    }

    pub fn halfspaces(&self) -> &[HalfSpace<S>] {
        &self.halfspaces
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn angles(&self) -> Vec<S> {
        self.contact_points.iter().map(|p| p.0[1].atan2(p.0[0])).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let pts = indices
            .iter()
            .map(|&i| {
                self.contact_points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidParameter(format!("contact index {i} out of range")))
            })
            .collect::<Result<_>>()?;
        Self::from_points(pts)
    }

    pub fn to_hpolytope(&self) -> Result<HPolytope<S>> {
        HPolytope::new(2, self.halfspaces.clone())
    }
}

/// A rotation whose image of a circle trace misses a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct Avoidance<S> {
    pub rotation: Rotation<S>,
    pub angle: S,
    /// Smallest distance from a point to the rotated trace.
    pub distance: S,
    pub tries: usize,
}

fn angle_of<S: Scalar>(p: &Point<S>) -> Result<S> {
    if p.dim() != 2 {
        return Err(Error::UnsupportedDimension { dim: p.dim(), reason: "rotation avoidance is planar" });
    }
    if (p.norm() - S::one()).abs() > S::lit(1e-9).max(S::feas_tol()) {
        return Err(Error::InvalidParameter("avoidance points must lie on the unit circle".into()));
    }
    Ok(p.0[1].atan2(p.0[0]))
}

/// Draws uniform rotations until the rotated trace `trace` misses every point.
pub fn avoid_trace<S: Scalar>(trace: &ArcSet<S>, points: &[Point<S>], max_tries: usize, seed: u64) -> Result<Avoidance<S>> {
    let angles: Vec<S> = points.iter().map(angle_of).collect::<Result<_>>()?;
    let load = S::from_usize(points.len()) * trace.measure();
    if load >= S::one() {
        return Err(Error::InvalidParameter(format!(
            "n * mu = {} is not below 1; avoidance is not guaranteed",
            load.as_f64()
        )));
    }
    let mut r = rng::stream(seed, 1);
    for tries in 1..=max_tries {
        let phi = S::TAU() * S::sample_unit(&mut r);
        let moved = trace.rotated(phi);
        let distance = angles.iter().map(|&a| moved.distance_from_angle(a)).fold(S::infinity(), S::min);
        if distance > S::zero() {
            return Ok(Avoidance { rotation: Rotation::planar(phi), angle: phi, distance, tries });
        }
    }
    Err(Error::SearchFailed(format!("no avoiding rotation in {max_tries} tries (n * mu = {})", load.as_f64())))
}

/// [`avoid_trace`] with the trace `K ∩ S^1`.
pub fn avoid_rotation<S: Scalar>(k: &Body<S>, points: &[Point<S>], max_tries: usize, seed: u64) -> Result<Avoidance<S>> {
    avoid_trace(&k.circle_arcs()?, points, max_tries, seed)
}

/// Avoiding rotations tried by [`inflation_search`].
pub const INFLATION_SAMPLES: usize = 16;
/// Tries per avoiding rotation.
pub const AVOID_TRIES: usize = 10_000;
/// Scale ceiling used when the family does not bound the copy.
pub const SCALE_CAP: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub struct Inflation<S> {
    /// Certified scale is `1 + delta2`.
    pub delta2: S,
    pub placement: Placement<S>,
    /// The family does not bound the copy; `delta2` stops at the scale cap.
    pub capped: bool,
    /// Slack of the cap `D(u)_eps1` around the removed arc's center.
    pub eps1: S,
    pub avoidance_distance: S,
}

/// Largest scale of a rotated copy of the cap body inside `family`, over
/// rotations that keep the part of `K` near the removed arc away from the
/// contact points. The result is re-certified before it is returned.
pub fn inflation_search<S: Scalar>(body: &CapBody<S>, family: &TangentFamily<S>, seed: u64) -> Result<Inflation<S>> {
    let n = family.len();
    if n == 0 {
        return Err(Error::Empty("tangent family"));
    }
    let center = body.removed_center_angle();
    let inv_n = S::one() / S::from_usize(n);
    let mut eps1 = S::lit(0.1);
    while cap_measure_2d(&body.body(), &Cap::at_angle(center, eps1))? >= inv_n {
        eps1 = eps1 / S::lit(2.0);
        if eps1 < S::lit(1e-12) {
            return Err(Error::SearchFailed(format!(
                "half-circle at the removed arc carries measure {} >= 1/{n}",
                body.half_circle_measure()?.as_f64()
            )));
        }
    }
    let trace = body.body().circle_arcs()?.intersect_arc(&Cap::at_angle(center, eps1).as_arc()?);
    let p = family.to_hpolytope()?;
    let cap = S::lit(SCALE_CAP);
    let all: Vec<usize> = (0..p.len()).collect();

    let mut best: Option<(S, Placement<S>, S)> = None;
    let mut failures = 0;
    for i in 0..INFLATION_SAMPLES {
        let sub = rng::sub_seed(seed, i as u64);
        let av = match avoid_trace(&trace, family.contact_points(), AVOID_TRIES, sub) {
            Ok(av) => av,
            Err(Error::SearchFailed(_)) => {
                failures += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let (mut lp, _) = fixed_rotation_instance(&body.polygon, &av.rotation, &p, &all);
        lp.push(&[S::zero(), S::zero(), S::one()], cap)?;
        let res = seidel_lp(&lp, sub)?;
        if res.status != LpStatus::Optimal {
            continue;
        }
        let placement = Placement {
            translation: Point(res.witness[..2].to_vec()),
            scale: res.value,
            rotation: av.rotation.clone(),
        };
        if best.as_ref().is_none_or(|(v, _, _)| res.value > *v) {
            best = Some((res.value, placement, av.distance));
        }
    }
    let Some((scale, placement, distance)) = best else {
        return Err(Error::SearchFailed(format!(
            "no feasible placement from {INFLATION_SAMPLES} samples ({failures} avoidance failures)"
        )));
    };
    let delta2 = scale - S::one();
    if !(delta2 > S::feas_tol()) {
        return Err(Error::SearchFailed(format!(
            "best scale {} does not exceed 1 (eps1 = {}, avoidance distance {})",
            scale.as_f64(),
            eps1.as_f64(),
            distance.as_f64()
        )));
    }
    let certified = fit_check(&body.polygon, &placement.rotation, scale, &p, seed)?
        && placement.fits_in(&body.polygon, &p, S::lit(1e-9).max(S::feas_tol()))?;
    if !certified {
        return Err(Error::SearchFailed(format!("placement at scale {} failed certification", scale.as_f64())));
    }
    let capped = scale >= cap - S::feas_tol() * cap;
    Ok(Inflation { delta2, placement, capped, eps1, avoidance_distance: distance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::miniball;
    use std::f64::consts::PI;

    #[test]
    fn three_cap_body_half_circle_below_third() {
        let b = cap_body(3, PI / 6.0, 128).unwrap();
        assert!((b.removed_width() - PI / 2.0).abs() < 1e-12);
        let mu = b.half_circle_measure().unwrap();
        assert!((mu - 0.25).abs() < 1e-12);
        assert!(mu < 1.0 / 3.0);
        assert_eq!(b.polygon.vertices().len(), 130);
    }

    #[test]
    fn cap_body_circumball_is_unit_disk() {
        for n in 2..7 {
            let b = cap_body(n, default_margin::<f64>(n), 64).unwrap();
            let ball = miniball(b.polygon.vertices(), 0).unwrap();
            assert!(ball.radius >= 1.0 - 1e-6 && ball.radius <= 1.0 + 1e-9, "n = {n}: {}", ball.radius);
        }
    }

    #[test]
    fn cap_body_rejects_bad_widths() {
        assert!(cap_body(3, 2.0 * PI, 16).is_err());
        assert!(cap_body(3, 0.0, 16).is_err());
        assert!(cap_body(1, 0.1, 16).is_err());
    }

    #[test]
    fn tangent_halfspaces_contain_unit_ball() {
        let f = TangentFamily::<f64>::random(20, 5).unwrap();
        for (u, h) in f.contact_points().iter().zip(f.halfspaces()) {
            assert_eq!(h.offset(), 1.0);
            assert!((h.normal().norm() - 1.0).abs() < 1e-12);
            assert!(h.excess(u).abs() < 1e-12);
        }
    }

    #[test]
    fn full_disk_is_rejected() {
        let err = avoid_rotation(&Body::Arc(ArcBody::<f64>::full_disk()), &[Point::xy(1.0, 0.0)], 10, 0);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn avoidance_reports_positive_distance() {
        let b = cap_body(3, PI / 6.0, 32).unwrap();
        let pts: Vec<Point<f64>> = [0.3, 2.0, 4.0].iter().map(|&a| Point::polar(a)).collect();
        let trace = b.body().circle_arcs().unwrap().intersect_arc(&Cap::at_angle(b.removed_center_angle(), 0.0).as_arc().unwrap());
        let av = avoid_trace(&trace, &pts, 1000, 4).unwrap();
        assert!(av.distance > 0.0);
        let moved = trace.rotated(av.angle);
        assert!(pts.iter().all(|p| !moved.contains_angle(p.0[1].atan2(p.0[0]))));
    }

    #[test]
    fn three_tangent_lines_admit_inflation() {
        let b = cap_body(3, PI / 6.0, 128).unwrap();
        let f = TangentFamily::from_angles(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]).unwrap();
        let inf = inflation_search(&b, &f, 0).unwrap();
        assert!(inf.delta2 > 0.0);
        assert!(!inf.capped);
        let p = f.to_hpolytope().unwrap();
        let again = crate::fit_lp::beta_fixed_rotation(&b.polygon, &inf.placement.rotation, &p, 9).unwrap();
        assert!(again.value >= 1.0 + inf.delta2 - 1e-9);
    }

    #[test]
    fn single_halfspace_inflation_is_capped() {
        let b = cap_body(2, 0.2, 32).unwrap();
        let f = TangentFamily::from_angles(&[1.0]).unwrap();
        let inf = inflation_search(&b, &f, 3).unwrap();
        assert!(inf.capped);
        assert!(inf.delta2 >= SCALE_CAP - 1.0 - 1e-6);
    }
}
