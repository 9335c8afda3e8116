//! Largest rotated-and-scaled copy of a convex polytope inside an
//! intersection of half-spaces.
//!
//! The search over all rotations is replaced by a finite rotation net; for a
//! fixed net the optimum is an LP-type problem over the half-spaces of the
//! container, solvable in expected linear time. A planar lab module builds
//! the families showing that shrinking the copy is unavoidable.
//!
//! Everything is generic over [`Scalar`] (`f64` and `f32`); the aliases at
//! the crate root fix `f64`, which is what all documented tolerances assume.

pub mod error;
pub mod fit_lp;
pub mod geometry;
pub mod lab;
mod linalg;
mod rng;
pub mod rotation_net;
pub mod scalar;
pub mod schema;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point = geometry::Point<f64>;
pub type HalfSpace = geometry::HalfSpace<f64>;
pub type HPolytope = geometry::HPolytope<f64>;
pub type VPolytope = geometry::VPolytope<f64>;
pub type Rotation = geometry::Rotation<f64>;
pub type Placement = geometry::Placement<f64>;
pub type Ball = geometry::Ball<f64>;
pub type Cap = geometry::Cap<f64>;
pub type ArcBody = geometry::ArcBody<f64>;
pub type LpInstance = fit_lp::LpInstance<f64>;
pub type LpResult = fit_lp::LpResult<f64>;
pub type RotationNet = rotation_net::RotationNet<f64>;
pub type FitResult = solver::FitResult<f64>;

pub type Point32 = geometry::Point<f32>;
pub type HPolytope32 = geometry::HPolytope<f32>;
pub type VPolytope32 = geometry::VPolytope<f32>;
pub type RotationNet32 = rotation_net::RotationNet<f32>;
pub type FitResult32 = solver::FitResult<f32>;
