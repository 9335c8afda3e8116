use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Ball, Placement, Point, VPolytope};
use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::Scalar;

/// Minimum enclosing ball (Welzl's randomized algorithm with the boundary
/// set bounded by `d + 1`). The seed only fixes the processing order.
pub fn miniball<S: Scalar>(points: &[Point<S>], seed: u64) -> Result<Ball<S>> {
    let first = points.first().ok_or(Error::Empty("miniball of no points"))?;
    let d = first.dim();
    for p in points {
        check_dim(d, p.dim())?;
    }
    let mut pts: Vec<Point<S>> = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let scale = pts.iter().map(|p| p.norm()).fold(S::zero(), S::max).max(S::one());
    let tol = S::lit(1e-12) * scale;
    let mut boundary = Vec::with_capacity(d + 1);
    let ball = welzl(&pts, pts.len(), &mut boundary, d, tol);
    Ok(ball)
}

fn welzl<S: Scalar>(pts: &[Point<S>], n: usize, boundary: &mut Vec<Point<S>>, d: usize, tol: S) -> Ball<S> {
    let mut ball = circumball(boundary, d);
    if boundary.len() == d + 1 {
        return ball;
    }
    for i in 0..n {
        if ball.radius < S::zero() || !ball.contains(&pts[i], tol) {
            boundary.push(pts[i].clone());
            ball = welzl(pts, i, boundary, d, tol);
            boundary.pop();
        }
    }
    ball
}

/// Smallest ball with all of `support` on its boundary, i.e. the circumcenter
/// within the affine hull. An empty support gives a negative radius.
fn circumball<S: Scalar>(support: &[Point<S>], d: usize) -> Ball<S> {
    match support.len() {
        0 => Ball { center: Point::origin(d), radius: -S::one() },
        1 => Ball { center: support[0].clone(), radius: S::zero() },
        k => {
            let base = &support[0];
            let diffs: Vec<Point<S>> = support[1..].iter().map(|p| p.sub(base)).collect();
            let m = k - 1;
            let mut gram = vec![S::zero(); m * m];
            let mut rhs = vec![S::zero(); m];
            for i in 0..m {
                for j in 0..m {
                    gram[i * m + j] = S::lit(2.0) * diffs[i].dot(&diffs[j]);
                }
                rhs[i] = diffs[i].dot(&diffs[i]);
            }
            match linalg::solve(m, &gram, &rhs, S::lit(1e-13)) {
                Some(lambda) => {
                    let mut c = base.clone();
                    for (l, v) in lambda.iter().zip(&diffs) {
                        c = c.add(&v.scale(*l));
                    }
                    let radius = support.iter().map(|p| p.distance(&c)).fold(S::zero(), S::max);
                    Ball { center: c, radius }
                }
                // affinely dependent support: the smallest sub-ball covering all of it
                None => {
                    let mut best: Option<Ball<S>> = None;
                    for skip in 0..k {
                        let sub: Vec<Point<S>> =
                            support.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| p.clone()).collect();
                        let b = circumball(&sub, d);
                        let covers = support.iter().all(|p| b.contains(p, S::lit(1e-9) * b.radius.max(S::one())));
                        if covers && best.as_ref().is_none_or(|bb| b.radius < bb.radius) {
                            best = Some(b);
                        }
                    }
                    best.unwrap_or_else(|| {
                        let c = base.clone();
                        let radius = support.iter().map(|p| p.distance(&c)).fold(S::zero(), S::max);
                        Ball { center: c, radius }
                    })
                }
            }
        }
    }
}

/// Record of `x -> (x - center) / radius`, used to move placements between
/// a body and its normalized copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Similarity<S> {
    pub center: Point<S>,
    pub radius: S,
}

impl<S: Scalar> Similarity<S> {
    pub fn identity(dim: usize) -> Self {
        Similarity { center: Point::origin(dim), radius: S::one() }
    }

    pub fn apply(&self, x: &Point<S>) -> Point<S> {
        x.sub(&self.center).scale(S::one() / self.radius)
    }

    pub fn invert(&self, y: &Point<S>) -> Point<S> {
        y.scale(self.radius).add(&self.center)
    }

    /// Given a placement of the normalized body `K'`, the placement of the
    /// original `K` describing the same point set.
    pub fn placement_for_original(&self, p: &Placement<S>) -> Placement<S> {
        let s = p.scale / self.radius;
        let shift = p.rotation.apply(&self.center).scale(s);
        Placement { translation: p.translation.sub(&shift), scale: s, rotation: p.rotation.clone() }
    }
}

/// Translates and scales `k` so that its minimum enclosing ball is the unit ball.
pub fn normalize_to_unit_ball<S: Scalar>(k: &VPolytope<S>) -> Result<(VPolytope<S>, Similarity<S>)> {
    k.check_full_dimensional()?;
    let ball = miniball(k.vertices(), 0)?;
    if !(ball.radius > S::lit(1e-12)) {
        return Err(Error::Degenerate("body has zero circumradius".into()));
    }
    let sim = Similarity { center: ball.center, radius: ball.radius };
    let verts = k.vertices().iter().map(|v| sim.apply(v)).collect();
    Ok((VPolytope::new(k.dim(), verts)?, sim))
}
