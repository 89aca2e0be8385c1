//! Scalar abstraction for the numeric kernels.
//!
//! All core math is generic over [`Scalar`] so the same kernels run in `f32`
//! or `f64`. The pipeline and the on-disk formats are pinned to `f64` through
//! the [`crate::Real`] alias; `f32` exists for cheap smoke coverage and for
//! callers that want a lighter precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, NumAssign};

/// Floating-point scalar usable by every kernel in this crate.
pub trait Scalar:
    Float + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn of(x: f64) -> Self;
    fn as_f64(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

/// Shorthand for `S::of(..)`; keeps literal-heavy stencil code readable.
#[inline]
pub fn c<S: Scalar>(x: f64) -> S {
    S::of(x)
}
