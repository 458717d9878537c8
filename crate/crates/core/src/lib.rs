//! L-stable region boundaries of implicit-explicit Runge-Kutta pairs.
//!
//! For a pair `(A, w, B, omega)` the stability function is
//! `R(z1, z2) = p(z1, z2) / q(z1)`, with `z1` the implicit and `z2` the
//! explicit eigenvalue times the step. The L-stable region is the set of `z2`
//! for which `|R(z1, z2)| <= 1` over the whole closed left half-plane in `z1`.
//! Writing `z2 = -1 + rho e^{i theta}`, the region boundary is a radius
//! function `rho(theta)` which this crate computes three ways:
//!
//! * [`boundary::trace_root_method`]: per ray, the smallest `rho` at which
//!   `F = |q(iy)|^2 - |p(iy, z2)|^2` and `dF/dy` vanish together, found by
//!   eliminating `y` with a Sylvester resultant.
//! * [`boundary::trace_definition_method`]: per ray, bisection on the
//!   membership test `min_y F >= 0`.
//! * [`boundary::trace_continuation_method`]: predictor-corrector tracking of
//!   one solution branch of `F = G = 0` in `theta`.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the file formats and CLI use.

pub mod boundary;
pub mod cheb;
pub mod eigen;
pub mod linalg;
pub mod output;
pub mod poly;
pub mod raysolve;
pub mod scalar;
pub mod stabfn;
pub mod tableau;

pub use scalar::Real;

pub type Tableau = tableau::ImexTableau<f64>;
pub type StabilityFunction = stabfn::StabilityFunction<f64>;
pub type RaySystem = raysolve::RaySystem<f64>;
pub type RayRoot = raysolve::RayRoot<f64>;
pub type BoundaryCurve = boundary::BoundaryCurve<f64>;
pub type UniPoly = poly::UniPoly<f64>;
pub type BiPoly = poly::BiPoly<f64>;
pub type Complex64 = num_complex::Complex<f64>;
