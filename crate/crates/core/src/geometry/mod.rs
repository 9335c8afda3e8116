//! Points, half-spaces, polytopes in both representations, placements and
//! the primitive predicates every other module builds on.

mod arcs;
mod hull;
mod miniball;
mod rotation;

pub use arcs::{cap_measure_2d, Arc, ArcBody, ArcSet, Body, Cap};
pub use hull::{convex_hull_2d, facets_from_vertices};
pub use miniball::{miniball, normalize_to_unit_ball, Similarity};
pub use rotation::{random_rotation, Rotation};
pub(crate) use hull::next_combination;
pub(crate) use rotation::random_rotation_with;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::Scalar;

/// A point (or vector) in R^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<S>(pub Vec<S>);

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![S::zero(); dim])
    }

    pub fn xy(x: S, y: S) -> Self {
        Point(vec![x, y])
    }

    /// Unit vector at `angle` in the plane.
    pub fn polar(angle: S) -> Self {
        Point(vec![angle.cos(), angle.sin()])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[S] {
        &self.0
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> S {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> S {
        self.dot(self).sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| *a - *b).collect())
    }

    pub fn scale(&self, s: S) -> Self {
        Point(self.0.iter().map(|a| *a * s).collect())
    }

    pub fn distance(&self, other: &Self) -> S {
        self.sub(other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

#[inline]
pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + *x * *y)
}

/// The closed half-space `<normal, x> <= offset` with a unit normal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfSpace<S> {
    normal: Point<S>,
    offset: S,
}

impl<S: Scalar> HalfSpace<S> {
    /// Builds a half-space, rescaling `(normal, offset)` so the normal has unit length.
    pub fn new(normal: Point<S>, offset: S) -> Result<Self> {
        let len = normal.norm();
        if !(len > S::zero()) || !len.is_finite() || !offset.is_finite() {
            return Err(Error::Degenerate("half-space normal must be finite and nonzero".into()));
        }
        Ok(HalfSpace { normal: normal.scale(S::one() / len), offset: offset / len })
    }

    /// The half-space `H_u = {x : <x, u> <= 1}` tangent to the unit ball at `u`.
    pub fn tangent(u: &Point<S>) -> Result<Self> {
        let len = u.norm();
        if (len - S::one()).abs() > S::lit(1e-9).max(S::feas_tol()) {
            return Err(Error::InvalidParameter("tangent point must lie on the unit sphere".into()));
        }
        Ok(HalfSpace { normal: u.scale(S::one() / len), offset: S::one() })
    }

    #[inline]
    pub fn normal(&self) -> &Point<S> {
        &self.normal
    }

    #[inline]
    pub fn offset(&self) -> S {
        self.offset
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Signed amount by which `x` violates the constraint (positive means outside).
    #[inline]
    pub fn excess(&self, x: &Point<S>) -> S {
        self.normal.dot(x) - self.offset
    }
}

/// An intersection of finitely many half-spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope<S> {
    dim: usize,
    halfspaces: Vec<HalfSpace<S>>,
}

impl<S: Scalar> HPolytope<S> {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace<S>>) -> Result<Self> {
        if halfspaces.is_empty() {
            return Err(Error::Empty("H-polytope needs at least one half-space"));
        }
        for h in &halfspaces {
            check_dim(dim, h.dim())?;
        }
        Ok(HPolytope { dim, halfspaces })
    }

    /// Axis-aligned box `[lo_i, hi_i]`.
    pub fn aabb(lo: &[S], hi: &[S]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let d = lo.len();
        let mut hs = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut e = vec![S::zero(); d];
            e[i] = S::one();
            hs.push(HalfSpace::new(Point(e.clone()), hi[i])?);
            e[i] = -S::one();
            hs.push(HalfSpace::new(Point(e), -lo[i])?);
        }
        HPolytope::new(d, hs)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn halfspaces(&self) -> &[HalfSpace<S>] {
        &self.halfspaces
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    /// The sub-family indexed by `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        HPolytope::new(self.dim, indices.iter().map(|&i| self.halfspaces[i].clone()).collect())
    }

    pub fn translate(&self, w: &Point<S>) -> Self {
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace { normal: h.normal.clone(), offset: h.offset + h.normal.dot(w) })
            .collect();
        HPolytope { dim: self.dim, halfspaces }
    }

    /// Dilation about the origin by `lambda > 0`.
    pub fn dilate(&self, lambda: S) -> Self {
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace { normal: h.normal.clone(), offset: h.offset * lambda })
            .collect();
        HPolytope { dim: self.dim, halfspaces }
    }

    /// The image `R P`.
    pub fn rotate(&self, r: &Rotation<S>) -> Self {
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace { normal: r.apply(&h.normal), offset: h.offset })
            .collect();
        HPolytope { dim: self.dim, halfspaces }
    }
}

/// True iff `<u_k, x> <= b_k + tol` for every half-space of `p`.
pub fn contains<S: Scalar>(p: &HPolytope<S>, x: &Point<S>, tol: S) -> Result<bool> {
    check_dim(p.dim(), x.dim())?;
    Ok(p.halfspaces.iter().all(|h| h.excess(x) <= tol))
}

/// A polytope given by a finite vertex list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VPolytope<S> {
    dim: usize,
    vertices: Vec<Point<S>>,
}

impl<S: Scalar> VPolytope<S> {
    pub fn new(dim: usize, vertices: Vec<Point<S>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Empty("V-polytope needs at least one vertex"));
        }
        for v in &vertices {
            check_dim(dim, v.dim())?;
            if !v.is_finite() {
                return Err(Error::Degenerate("non-finite vertex coordinate".into()));
            }
        }
        Ok(VPolytope { dim, vertices })
    }

    /// Like [`VPolytope::new`], additionally requiring `dim + 1` affinely
    /// independent vertices.
    pub fn body(dim: usize, vertices: Vec<Point<S>>) -> Result<Self> {
        let k = VPolytope::new(dim, vertices)?;
        k.check_full_dimensional()?;
        Ok(k)
    }

    /// Regular polygon with `m` vertices on the circle of radius `radius`,
    /// first vertex at angle `phase`.
    pub fn regular_polygon(m: usize, radius: S, phase: S) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParameter("regular polygon needs at least 3 vertices".into()));
        }
        let step = S::TAU() / S::from_usize(m);
        let vs = (0..m)
            .map(|j| Point::polar(phase + step * S::from_usize(j)).scale(radius))
            .collect();
        VPolytope::new(2, vs)
    }

    pub fn check_full_dimensional(&self) -> Result<()> {
        let base = &self.vertices[0];
        let rows: Vec<Vec<S>> = self.vertices[1..].iter().map(|v| v.sub(base).0).collect();
        if self.vertices.len() < self.dim + 1 || linalg::rank(&rows, self.dim, S::lit(1e-10)) < self.dim {
            return Err(Error::Degenerate(format!(
                "body must have {} affinely independent vertices",
                self.dim + 1
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    pub fn translate(&self, w: &Point<S>) -> Self {
        VPolytope { dim: self.dim, vertices: self.vertices.iter().map(|v| v.add(w)).collect() }
    }

    pub fn scale(&self, s: S) -> Self {
        VPolytope { dim: self.dim, vertices: self.vertices.iter().map(|v| v.scale(s)).collect() }
    }

    pub fn rotate(&self, r: &Rotation<S>) -> Self {
        VPolytope { dim: self.dim, vertices: self.vertices.iter().map(|v| r.apply(v)).collect() }
    }

    /// Mirror image across the hyperplane `x_0 = 0`.
    pub fn reflect(&self) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let mut c = v.0.clone();
                c[0] = -c[0];
                Point(c)
            })
            .collect();
        VPolytope { dim: self.dim, vertices }
    }

    /// Facet description of the convex hull of the vertices.
    pub fn to_hpolytope(&self) -> Result<HPolytope<S>> {
        HPolytope::new(self.dim, facets_from_vertices(self)?)
    }
}

/// The triple `(a, alpha, A)` standing for the set `a + alpha * A * K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct Placement<S> {
    pub translation: Point<S>,
    pub scale: S,
    pub rotation: Rotation<S>,
}

impl<S: Scalar> Placement<S> {
    pub fn identity(dim: usize) -> Self {
        Placement { translation: Point::origin(dim), scale: S::one(), rotation: Rotation::identity(dim) }
    }

    pub fn map_point(&self, v: &Point<S>) -> Point<S> {
        self.translation.add(&self.rotation.apply(v).scale(self.scale))
    }

    /// Vertices of `a + alpha * A * K`.
    pub fn realize(&self, k: &VPolytope<S>) -> Vec<Point<S>> {
        k.vertices().iter().map(|v| self.map_point(v)).collect()
    }

    /// True iff every realized vertex lies in `p` within `tol`.
    pub fn fits_in(&self, k: &VPolytope<S>, p: &HPolytope<S>, tol: S) -> Result<bool> {
        check_dim(p.dim(), k.dim())?;
        for v in self.realize(k) {
            if !contains(p, &v, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A closed Euclidean ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball<S> {
    pub center: Point<S>,
    pub radius: S,
}

impl<S: Scalar> Ball<S> {
    pub fn contains(&self, x: &Point<S>, tol: S) -> bool {
        self.center.distance(x) <= self.radius + tol
    }
}
