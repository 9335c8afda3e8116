//! Subsets of the unit circle: arcs, caps `D(u)_eps`, and bodies whose
//! intersection with the circle is a union of arcs.

use serde::{Deserialize, Serialize};

use super::{Point, VPolytope};
use crate::error::{Error, Result};
use crate::Scalar;

/// Closed arc `{angle : start <= angle <= start + length}` on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc<S> {
    pub start: S,
    pub length: S,
}

impl<S: Scalar> Arc<S> {
    pub fn new(start: S, length: S) -> Self {
        let tau = S::TAU();
        Arc { start: wrap(start), length: length.max(S::zero()).min(tau) }
    }

    pub fn centered(center: S, half_width: S) -> Self {
        Arc::new(center - half_width, half_width + half_width)
    }

    pub fn contains_angle(&self, angle: S) -> bool {
        let rel = wrap(angle - self.start);
        rel <= self.length || self.length >= S::TAU()
    }

    /// Angular gap between `angle` and this arc (0 when inside).
    pub fn angular_gap(&self, angle: S) -> S {
        if self.contains_angle(angle) {
            return S::zero();
        }
        let to_start = wrap(self.start - angle);
        let from_end = wrap(angle - (self.start + self.length));
        to_start.min(from_end)
    }
}

/// Reduces an angle to `[0, 2 pi)`.
pub(crate) fn wrap<S: Scalar>(a: S) -> S {
    let tau = S::TAU();
    let r = a % tau;
    let r = if r < S::zero() { r + tau } else { r };
    if r >= tau { S::zero() } else { r }
}

/// Finite union of pairwise disjoint arcs.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ArcSet<S> {
    arcs: Vec<Arc<S>>,
}

impl<S: Scalar> ArcSet<S> {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet { arcs: vec![Arc::new(S::zero(), S::TAU())] }
    }

    pub fn from_arcs(arcs: Vec<Arc<S>>) -> Self {
        ArcSet { arcs: arcs.into_iter().filter(|a| a.length > S::zero()).collect() }
    }

    pub fn arcs(&self) -> &[Arc<S>] {
        &self.arcs
    }

    /// Normalized (probability) measure.
    pub fn measure(&self) -> S {
        (self.arcs.iter().map(|a| a.length).sum::<S>() / S::TAU()).min(S::one())
    }

    pub fn contains_angle(&self, angle: S) -> bool {
        self.arcs.iter().any(|a| a.contains_angle(angle))
    }

    pub fn rotated(&self, phi: S) -> Self {
        ArcSet { arcs: self.arcs.iter().map(|a| Arc::new(a.start + phi, a.length)).collect() }
    }

    pub fn intersect_arc(&self, other: &Arc<S>) -> Self {
        let tau = S::TAU();
        let mut out = Vec::new();
        for a in &self.arcs {
            let (a0, a1) = (a.start, a.start + a.length);
            for shift in [-tau, S::zero(), tau] {
                let b0 = other.start + shift;
                let b1 = b0 + other.length;
                let lo = a0.max(b0);
                let hi = a1.min(b1);
                if hi > lo {
                    out.push(Arc::new(lo, hi - lo));
                }
            }
        }
        ArcSet::from_arcs(out)
    }

    /// Euclidean distance from the circle point at `angle` to the set.
    pub fn distance_from_angle(&self, angle: S) -> S {
        let gap = self.arcs.iter().map(|a| a.angular_gap(angle)).fold(S::infinity(), S::min);
        if gap.is_infinite() {
            return S::infinity();
        }
        let gap = gap.min(S::PI());
        S::lit(2.0) * (gap / S::lit(2.0)).sin()
    }
}

/// The open cap `D(u)_eps = {x in S^1 : <x, u> > -eps}`; `eps = 0` gives the
/// half-circle `D(u)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cap<S> {
    pub direction: Point<S>,
    pub slack: S,
}

impl<S: Scalar> Cap<S> {
    pub fn new(direction: Point<S>, slack: S) -> Result<Self> {
        if (direction.norm() - S::one()).abs() > S::lit(1e-9).max(S::feas_tol()) {
            return Err(Error::InvalidParameter("cap direction must be a unit vector".into()));
        }
        if slack < S::zero() {
            return Err(Error::InvalidParameter("cap slack must be nonnegative".into()));
        }
        Ok(Cap { direction, slack })
    }

    pub fn at_angle(angle: S, slack: S) -> Self {
        Cap { direction: Point::polar(angle), slack }
    }

    /// The cap as an arc of the circle (planar caps only).
    pub fn as_arc(&self) -> Result<Arc<S>> {
        if self.direction.dim() != 2 {
            return Err(Error::UnsupportedDimension { dim: self.direction.dim(), reason: "exact cap measures are planar" });
        }
        let center = self.direction.0[1].atan2(self.direction.0[0]);
        let half = if self.slack >= S::one() { S::PI() } else { (-self.slack).acos() };
        Ok(Arc::centered(center, half))
    }
}

/// Convex hull of the unit circle with one open arc removed, given by the
/// removed arc's center angle and width (radians). Width 0 is the full disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcBody<S> {
    pub removed_center_angle: S,
    pub removed_width: S,
}

impl<S: Scalar> ArcBody<S> {
    pub fn new(removed_center_angle: S, removed_width: S) -> Result<Self> {
        if !(removed_width >= S::zero()) || removed_width >= S::TAU() {
            return Err(Error::InvalidParameter("removed width must lie in [0, 2 pi)".into()));
        }
        Ok(ArcBody { removed_center_angle, removed_width })
    }

    pub fn full_disk() -> Self {
        ArcBody { removed_center_angle: S::zero(), removed_width: S::zero() }
    }

    /// The retained arc `K ∩ S^1`.
    pub fn retained(&self) -> Arc<S> {
        let half = self.removed_width / S::lit(2.0);
        Arc::new(self.removed_center_angle + half, S::TAU() - self.removed_width)
    }

    /// Polygon with the two retained-arc endpoints and `m` evenly spaced
    /// interior points of the retained arc.
    pub fn discretize(&self, m: usize) -> Result<VPolytope<S>> {
        let arc = self.retained();
        let steps = S::from_usize(m + 1);
        let closed = arc.length >= S::TAU();
        let count = if closed { m + 1 } else { m + 2 };
        let vs = (0..count)
            .map(|j| Point::polar(arc.start + arc.length * S::from_usize(j) / steps))
            .collect();
        VPolytope::new(2, vs)
    }
}

/// Planar body whose trace on the unit circle is known exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Body<S> {
    Polygon(VPolytope<S>),
    Arc(ArcBody<S>),
}

impl<S: Scalar> Body<S> {
    /// `K ∩ S^1` as arcs. Polygons meet the circle in finitely many points,
    /// which carry no measure.
    pub fn circle_arcs(&self) -> Result<ArcSet<S>> {
        match self {
            Body::Polygon(k) => {
                if k.dim() != 2 {
                    return Err(Error::UnsupportedDimension { dim: k.dim(), reason: "exact cap measures are planar" });
                }
                Ok(ArcSet::empty())
            }
            Body::Arc(a) => Ok(ArcSet::from_arcs(vec![a.retained()])),
        }
    }
}

/// Normalized arc-length measure of `{x in S^1 ∩ K : <x, u> > -eps}`.
pub fn cap_measure_2d<S: Scalar>(k: &Body<S>, cap: &Cap<S>) -> Result<S> {
    let arcs = k.circle_arcs()?;
    Ok(arcs.intersect_arc(&cap.as_arc()?).measure())
}
