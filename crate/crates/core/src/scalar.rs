//! Scalar abstraction shared by every geometric routine in the crate.
//!
//! All algorithms are written against [`Scalar`]; tolerances are part of the
//! trait so that `f32` builds get thresholds matching their precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type usable as a coordinate.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Absolute feasibility tolerance on constraints with unit normals.
    fn feas_tol() -> Self;
    /// Coefficients below this magnitude are treated as zero inside the LP.
    fn pivot_tol() -> Self;
    /// Slack below which a containment is no longer considered strict.
    fn strict_margin() -> Self;
    /// Half-width of the bounding box used to keep LPs bounded.
    fn lp_box() -> Self;

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal representable")
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_scalar {
    ($t:ty, $feas:expr, $pivot:expr, $strict:expr, $bx:expr) => {
        impl Scalar for $t {
            #[inline]
            fn feas_tol() -> Self {
                $feas
            }
            #[inline]
            fn pivot_tol() -> Self {
                $pivot
            }
            #[inline]
            fn strict_margin() -> Self {
                $strict
            }
            #[inline]
            fn lp_box() -> Self {
                $bx
            }
            fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }
            fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.random::<$t>()
            }
        }
    };
}

impl_scalar!(f64, 1e-9, 1e-12, 1e-14, 1e6);
impl_scalar!(f32, 1e-4, 1e-6, 1e-6, 1e4);
