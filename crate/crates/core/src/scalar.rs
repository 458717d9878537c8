//! Floating-point scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into this type.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in target float")
    }

    /// Rescales a tolerance calibrated for `f64` to this type's precision.
    ///
    /// For `f64` this is the identity; for coarser types the tolerance grows
    /// with the ratio of machine epsilons.
    fn tol(x: f64) -> Self {
        let ratio = Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON;
        Self::c(x * ratio.max(1.0))
    }

    /// Like [`Real::tol`] but scaled with the square root of the precision
    /// ratio, for thresholds that sit near `sqrt(eps)` (clustered roots).
    fn tol_sqrt(x: f64) -> Self {
        let ratio = Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON;
        Self::c(x * ratio.max(1.0).sqrt())
    }

    fn two() -> Self {
        Self::c(2.0)
    }

    fn half() -> Self {
        Self::c(0.5)
    }

    fn pi() -> Self {
        Self::c(std::f64::consts::PI)
    }

    fn tau() -> Self {
        Self::c(std::f64::consts::TAU)
    }

    fn usize(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in target float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex numbers over a [`Real`] type.
pub type C<T> = Complex<T>;

/// Entries the dense eliminator can operate on: reals and complex numbers.
pub trait Entry: Copy + NumAssign + std::ops::Neg<Output = Self> + Debug {
    type R: Real;
    fn magnitude(self) -> Self::R;
}

impl<T: Real> Entry for T {
    type R = T;
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Real> Entry for Complex<T> {
    type R = T;
    fn magnitude(self) -> T {
        self.norm()
    }
}
