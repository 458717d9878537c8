//! Boundary tracing on a uniform grid of ray angles, and region area.

mod continuation;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::raysolve::{self, build_ray_system, min_f_over_y, smallest_valid_root, RayError, RaySystem};
use crate::scalar::Real;
use crate::stabfn::StabilityFunction;

pub use continuation::trace_continuation_method;

/// Coarse scan resolution of the definition method: `rho_max / COARSE_STEPS`.
pub const COARSE_STEPS: usize = 1024;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const MIN_SAMPLES: usize = 4;
/// Angle offset used to step off a degenerate ray.
const THETA_NUDGE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Root,
    Definition,
    Continuation,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Root => "root",
            Method::Definition => "definition",
            Method::Continuation => "continuation",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "root" => Ok(Method::Root),
            "definition" => Ok(Method::Definition),
            "continuation" => Ok(Method::Continuation),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointStatus {
    Ok,
    /// The resultant degenerated on this ray; the value came from a nudged
    /// angle or from bisection.
    Fallback,
    Failed,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Fallback => "fallback",
            PointStatus::Failed => "failed",
        }
    }
}

impl fmt::Display for PointStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PointStatus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ok" => Ok(PointStatus::Ok),
            "fallback" => Ok(PointStatus::Fallback),
            "failed" => Ok(PointStatus::Failed),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint<T> {
    pub theta: T,
    /// Radius about the center; NaN for failed rays.
    pub rho: T,
    pub status: PointStatus,
}

impl<T: Real> BoundaryPoint<T> {
    fn ok(theta: T, rho: T) -> Self {
        Self {
            theta,
            rho,
            status: PointStatus::Ok,
        }
    }

    fn failed(theta: T) -> Self {
        Self {
            theta,
            rho: T::nan(),
            status: PointStatus::Failed,
        }
    }

    /// `z2 = -1 + rho e^{i theta}`.
    pub fn z2(&self) -> Complex<T> {
        Complex::new(-T::one() + self.rho * self.theta.cos(), self.rho * self.theta.sin())
    }
}

/// Ordered boundary samples about the center `z2 = -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve<T> {
    pub method: Method,
    pub points: Vec<BoundaryPoint<T>>,
}

impl<T: Real> BoundaryCurve<T> {
    pub fn center(&self) -> Complex<T> {
        Complex::new(-T::one(), T::zero())
    }

    pub fn failed_thetas(&self) -> Vec<T> {
        self.points
            .iter()
            .filter(|p| p.status == PointStatus::Failed)
            .map(|p| p.theta)
            .collect()
    }

    /// `(min, max)` radius over rays that did not fail.
    pub fn rho_range(&self) -> Option<(T, T)> {
        self.points
            .iter()
            .filter(|p| p.status != PointStatus::Failed)
            .fold(None, |acc, p| match acc {
                None => Some((p.rho, p.rho)),
                Some((lo, hi)) => Some((lo.min(p.rho), hi.max(p.rho))),
            })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundaryError {
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("rho_max must be positive and finite")]
    InvalidRhoMax,
    #[error("tolerance must be positive")]
    InvalidTol,
    #[error("theta step must be positive and finite")]
    InvalidStep,
    #[error("center -1 is not inside the region, the ray parametrization does not apply: {0}")]
    Interior(RayError),
    #[error("scheme is not L-stable on this ray: {0}")]
    NotLStable(RayError),
    #[error("continuation could not be seeded at theta = 0: {0}")]
    Seed(RayError),
    #[error(transparent)]
    Ray(RayError),
    #[error("{} ray(s) failed, at theta = {}", .0.len(), fmt_list(.0))]
    FailedRays(Vec<f64>),
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|t| format!("{t:.6}")).collect::<Vec<_>>().join(", ")
}

impl From<RayError> for BoundaryError {
    fn from(e: RayError) -> Self {
        match e {
            RayError::InteriorViolation { .. } => BoundaryError::Interior(e),
            RayError::NotLStableAtInfinity { .. } => BoundaryError::NotLStable(e),
            other => BoundaryError::Ray(other),
        }
    }
}

/// `theta_k = 2 pi k / n` for `k = 0..n`.
pub fn theta_grid<T: Real>(n: usize) -> Vec<T> {
    (0..n).map(|k| T::tau() * T::usize(k) / T::usize(n)).collect()
}

fn check_common<T: Real>(n: usize, rho_max: T) -> Result<(), BoundaryError> {
    if n < MIN_SAMPLES {
        return Err(BoundaryError::TooFewSamples(n));
    }
    if !(rho_max > T::zero() && rho_max.is_finite()) {
        return Err(BoundaryError::InvalidRhoMax);
    }
    Ok(())
}

/// Runs `per_ray` over the grid in parallel, keeping grid order and
/// reporting the first error in grid order.
fn sweep<T: Real>(
    n: usize,
    per_ray: impl Fn(T) -> Result<BoundaryPoint<T>, BoundaryError> + Sync + Send,
) -> Result<Vec<BoundaryPoint<T>>, BoundaryError> {
    let results: Vec<_> = theta_grid::<T>(n).into_par_iter().map(per_ray).collect();
    results.into_iter().collect()
}

/// Boundary by smallest resultant roots, one independent solve per ray.
pub fn trace_root_method<T: Real>(
    sf: &StabilityFunction<T>,
    n_samples: usize,
    rho_max: T,
) -> Result<BoundaryCurve<T>, BoundaryError> {
    check_common(n_samples, rho_max)?;
    let points = sweep(n_samples, |theta| root_ray(sf, theta, rho_max))?;
    Ok(BoundaryCurve {
        method: Method::Root,
        points,
    })
}

/// Root-method solve of a single ray, with the degenerate-resultant fallback.
pub fn root_ray<T: Real>(sf: &StabilityFunction<T>, theta: T, rho_max: T) -> Result<BoundaryPoint<T>, BoundaryError> {
    let rs = build_ray_system(sf, theta)?;
    match smallest_valid_root(&rs, rho_max) {
        Ok(r) => Ok(BoundaryPoint::ok(theta, r.rho)),
        Err(RayError::ResultantVanishes) => degenerate_ray(sf, &rs, theta, rho_max),
        Err(RayError::NoRootOnRay { .. }) | Err(RayError::Eigen(_)) => Ok(BoundaryPoint::failed(theta)),
        Err(e) => Err(e.into()),
    }
}

fn degenerate_ray<T: Real>(
    sf: &StabilityFunction<T>,
    rs: &RaySystem<T>,
    theta: T,
    rho_max: T,
) -> Result<BoundaryPoint<T>, BoundaryError> {
    let nudge = T::c(THETA_NUDGE);
    let mut nudged = Vec::with_capacity(2);
    for shifted in [theta + nudge, theta - nudge] {
        let r = build_ray_system(sf, shifted).and_then(|rs| smallest_valid_root(&rs, rho_max));
        match r {
            Ok(root) => nudged.push(root.rho),
            Err(RayError::ResultantVanishes) => {}
            Err(RayError::NoRootOnRay { .. }) | Err(RayError::Eigen(_)) => return Ok(BoundaryPoint::failed(theta)),
            Err(e) => return Err(e.into()),
        }
    }
    let rho = if nudged.len() == 2 {
        Some(T::half() * (nudged[0] + nudged[1]))
    } else {
        bisect_ray(sf, rs, rho_max, T::c(DEFAULT_TOL))?
    };
    Ok(match rho {
        Some(rho) => BoundaryPoint {
            theta,
            rho,
            status: PointStatus::Fallback,
        },
        None => BoundaryPoint::failed(theta),
    })
}

/// Boundary by bisection on the membership test, one solve per ray.
pub fn trace_definition_method<T: Real>(
    sf: &StabilityFunction<T>,
    n_samples: usize,
    rho_max: T,
    tol: T,
) -> Result<BoundaryCurve<T>, BoundaryError> {
    check_common(n_samples, rho_max)?;
    if !(tol > T::zero()) {
        return Err(BoundaryError::InvalidTol);
    }
    let points = sweep(n_samples, |theta| {
        let rs = build_ray_system(sf, theta)?;
        Ok(match bisect_ray(sf, &rs, rho_max, tol)? {
            Some(rho) => BoundaryPoint::ok(theta, rho),
            None => BoundaryPoint::failed(theta),
        })
    })?;
    Ok(BoundaryCurve {
        method: Method::Definition,
        points,
    })
}

/// Whether `z2 = -1 + rho e^{i theta}` lies in the region: `|R(iy, z2)| <= 1`
/// for every real `y`, and also in the limit `|z1| -> inf`.
pub fn is_member<T: Real>(sf: &StabilityFunction<T>, rs: &RaySystem<T>, rho: T) -> Result<bool, RayError> {
    let theta = rs.theta();
    let z2 = Complex::new(-T::one() + rho * theta.cos(), rho * theta.sin());
    if !stiff_limit_ok(sf, z2) {
        return Ok(false);
    }
    match min_f_over_y(rs, rho) {
        Ok((m, _)) => Ok(m >= T::zero()),
        Err(RayError::NotLStableAtInfinity { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `|R(inf, z2)| <= 1`, or no `z1` dependence at all when `q` is constant.
pub fn stiff_limit_ok<T: Real>(sf: &StabilityFunction<T>, z2: Complex<T>) -> bool {
    match sf.stiff_limit(z2) {
        Ok(l) => l.norm() <= T::one(),
        Err(_) => sf.p().deg_x() == 0,
    }
}

/// First membership loss on a uniform coarse scan of `(0, rho_max]`, refined
/// by bisection to width `tol`. `None` when membership never fails.
pub fn bisect_ray<T: Real>(
    sf: &StabilityFunction<T>,
    rs: &RaySystem<T>,
    rho_max: T,
    tol: T,
) -> Result<Option<T>, RayError> {
    let (center, y) = min_f_over_y(rs, T::zero())?;
    if center <= T::zero() || !stiff_limit_ok(sf, Complex::new(-T::one(), T::zero())) {
        return Err(RayError::InteriorViolation {
            theta: rs.theta().to_f64().unwrap_or(f64::NAN),
            y: y.to_f64().unwrap_or(f64::NAN),
            value: center.to_f64().unwrap_or(f64::NAN),
        });
    }
    let h = rho_max / T::usize(COARSE_STEPS);
    let mut lo = T::zero();
    for k in 1..=COARSE_STEPS {
        let hi = if k == COARSE_STEPS { rho_max } else { h * T::usize(k) };
        if is_member(sf, rs, hi)? {
            lo = hi;
            continue;
        }
        let mut hi = hi;
        while hi - lo > tol {
            let mid = T::half() * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if is_member(sf, rs, mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(Some(T::half() * (lo + hi)));
    }
    Ok(None)
}

/// Region area `int_0^{2 pi} rho^2 / 2 dtheta` by the periodic trapezoid rule.
pub fn area<T: Real>(curve: &BoundaryCurve<T>) -> Result<T, BoundaryError> {
    let n = curve.points.len();
    if n < MIN_SAMPLES {
        return Err(BoundaryError::TooFewSamples(n));
    }
    let failed = curve.failed_thetas();
    if !failed.is_empty() {
        return Err(BoundaryError::FailedRays(
            failed.into_iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect(),
        ));
    }
    let sum: T = curve.points.iter().map(|p| T::half() * p.rho * p.rho).sum();
    Ok(T::tau() * sum / T::usize(n))
}

/// Convenience: every ray's [`raysolve::RayRoot`] for the root method,
/// without the fallback machinery. Used for witness-level diagnostics.
pub fn ray_roots<T: Real>(
    sf: &StabilityFunction<T>,
    n_samples: usize,
    rho_max: T,
) -> Vec<Result<raysolve::RayRoot<T>, RayError>> {
    theta_grid::<T>(n_samples)
        .into_par_iter()
        .map(|theta| build_ray_system(sf, theta).and_then(|rs| smallest_valid_root(&rs, rho_max)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabfn::stability_polynomials;
    use crate::tableau::parse_tableau;

    fn euler() -> StabilityFunction<f64> {
        stability_polynomials(&parse_tableau(r#"{"s":1,"A":[[1]],"w":[1],"B":[[0]],"omega":[1]}"#).unwrap()).unwrap()
    }

    fn constant_curve(rho: f64, n: usize) -> BoundaryCurve<f64> {
        BoundaryCurve {
            method: Method::Root,
            points: theta_grid(n).into_iter().map(|t| BoundaryPoint::ok(t, rho)).collect(),
        }
    }

    #[test]
    fn area_of_constant_radius() {
        assert_eq!(area(&constant_curve(1.0, 7)).unwrap(), std::f64::consts::PI);
        assert!((area(&constant_curve(2.0, 16)).unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn area_refuses_failed_rays() {
        let mut c = constant_curve(1.0, 8);
        c.points[3] = BoundaryPoint::failed(c.points[3].theta);
        match area(&c) {
            Err(BoundaryError::FailedRays(t)) => assert_eq!(t.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn euler_root_method_circle() {
        let c = trace_root_method(&euler(), 8, 10.0).unwrap();
        assert_eq!(c.points.len(), 8);
        for p in &c.points {
            assert_eq!(p.status, PointStatus::Ok);
            assert!((p.rho - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(trace_root_method(&euler(), 3, 10.0), Err(BoundaryError::TooFewSamples(3)));
        assert_eq!(
            trace_definition_method(&euler(), 3, 10.0, 1e-10),
            Err(BoundaryError::TooFewSamples(3))
        );
    }

    #[test]
    fn euler_definition_method() {
        let c = trace_definition_method(&euler(), 8, 10.0, 1e-10).unwrap();
        for p in &c.points {
            assert!((p.rho - 1.0).abs() <= 1e-10, "{p:?}");
        }
    }

    #[test]
    fn capped_definition_fails_everywhere() {
        let c = trace_definition_method(&euler(), 8, 0.5, 1e-10).unwrap();
        assert!(c.points.iter().all(|p| p.status == PointStatus::Failed));
        let c = trace_root_method(&euler(), 8, 0.5).unwrap();
        assert!(c.points.iter().all(|p| p.status == PointStatus::Failed));
    }

    #[test]
    fn interior_violation_aborts() {
        let t = parse_tableau(r#"{"s":1,"A":[[1]],"w":[1],"B":[[0]],"omega":[3]}"#).unwrap();
        let sf = stability_polynomials(&t).unwrap();
        assert!(matches!(trace_root_method(&sf, 8, 10.0), Err(BoundaryError::Interior(_))));
        assert!(matches!(
            trace_definition_method(&sf, 8, 10.0, 1e-10),
            Err(BoundaryError::Interior(_))
        ));
    }

    #[test]
    fn method_and_status_parse() {
        for m in [Method::Root, Method::Definition, Method::Continuation] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        for s in [PointStatus::Ok, PointStatus::Fallback, PointStatus::Failed] {
            assert_eq!(s.as_str().parse::<PointStatus>().unwrap(), s);
        }
        assert!("spline".parse::<Method>().is_err());
    }
}
