//! Per-ray boundary equations about the center `z2 = -1`.
//!
//! Along the ray `z2 = -1 + rho e^{i theta}` and with `z1 = i y` on the
//! imaginary axis, the modulus condition `|R| <= 1` becomes `F(y, rho) >= 0`
//! with
//!
//! ```text
//! F(y, rho) = |q(iy)|^2 - |p(iy, -1 + rho e^{i theta})|^2,   G = dF/dy.
//! ```
//!
//! The boundary radius is the smallest `rho > 0` at which `F` and `G` vanish
//! together for some real `y`, i.e. where `min_y F` first touches zero.

mod resultant;
mod roots;

use num_complex::Complex;
use num_traits::Zero;

use crate::eigen::EigenError;
use crate::poly::{binomial, BiPoly, ComplexBiPoly, UniPoly};
use crate::scalar::Real;
use crate::stabfn::StabilityFunction;

pub use roots::real_roots;

/// Roots at or below this radius are the center itself.
pub const RHO_EPS: f64 = 1e-9;
/// Witness residuals must sit below this fraction of the coefficient scale of `F`.
pub const VERIFY_REL: f64 = 1e-8;
/// Maximum tolerated imaginary residue in the coefficients of `F`.
pub const IMAG_RESIDUE_REL: f64 = 1e-10;
/// Real coefficients of `F` below this fraction of the scale are rounding noise.
const F_SNAP_REL: f64 = 1e-14;
const POLISH_ITERS: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RayError {
    #[error("no boundary root on ray theta = {theta} up to rho_max = {rho_max}")]
    NoRootOnRay { theta: f64, rho_max: f64 },
    #[error("|R| exceeds 1 as z1 -> i*inf on ray theta = {theta} at rho = {rho}")]
    NotLStableAtInfinity { theta: f64, rho: f64 },
    #[error("center z2 = -1 is not strictly inside the region: F(y = {y}, 0) = {value} on ray theta = {theta}")]
    InteriorViolation { theta: f64, y: f64, value: f64 },
    #[error("resultant vanishes identically; F and G share a factor in y")]
    ResultantVanishes,
    #[error("F does not depend on y; use the direct radial solve")]
    NoYDependence,
    #[error("imaginary residue {residue:e} in the coefficients of F on ray theta = {theta}")]
    ImaginaryResidue { theta: f64, residue: f64 },
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// `F` and `G = dF/dy` for one ray angle.
///
/// Both are stored as [`BiPoly`] with first variable `y` and second `rho`.
#[derive(Debug, Clone)]
pub struct RaySystem<T> {
    theta: T,
    f: BiPoly<T>,
    g: BiPoly<T>,
    f_rho: BiPoly<T>,
    g_y: BiPoly<T>,
    g_rho: BiPoly<T>,
    imag_residue: T,
}

impl<T: Real> RaySystem<T> {
    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn f(&self) -> &BiPoly<T> {
        &self.f
    }

    pub fn g(&self) -> &BiPoly<T> {
        &self.g
    }

    /// Relative imaginary residue dropped during construction.
    pub fn imaginary_residue(&self) -> T {
        self.imag_residue
    }

    /// Largest coefficient magnitude of `F`.
    pub fn scale(&self) -> T {
        self.f.scale()
    }

    /// `F(., rho)` as a polynomial in `y`.
    pub fn f_at(&self, rho: T) -> UniPoly<T> {
        self.f.at_y(rho)
    }

    /// `G(., rho)` as a polynomial in `y`.
    pub fn g_at(&self, rho: T) -> UniPoly<T> {
        self.g.at_y(rho)
    }

    fn theta_f64(&self) -> f64 {
        self.theta.to_f64().unwrap_or(f64::NAN)
    }

    /// Newton on `(F, G) = 0` in `(y, rho)`. Returns the converged point.
    fn polish(&self, mut y: T, mut rho: T) -> Option<(T, T)> {
        let tiny = T::epsilon() * T::c(4.0);
        for _ in 0..POLISH_ITERS {
            let f = self.f.eval(y, rho);
            let g = self.g.eval(y, rho);
            let (a, b) = (self.g.eval(y, rho), self.f_rho.eval(y, rho));
            let (c, d) = (self.g_y.eval(y, rho), self.g_rho.eval(y, rho));
            let det = a * d - b * c;
            if det.is_zero() || !det.is_finite() {
                return None;
            }
            let dy = (f * d - b * g) / det;
            let drho = (a * g - c * f) / det;
            y -= dy;
            rho -= drho;
            if !(y.is_finite() && rho.is_finite()) {
                return None;
            }
            if dy.abs() <= tiny * (T::one() + y.abs()) && drho.abs() <= tiny * (T::one() + rho.abs()) {
                return Some((y, rho));
            }
        }
        // Accept a point that stopped improving at rounding level.
        let res = self.f.eval(y, rho).abs().max(self.g.eval(y, rho).abs());
        (res <= T::tol(1e-13) * self.scale()).then_some((y, rho))
    }
}

/// One boundary point on a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayRoot<T> {
    pub theta: T,
    pub rho: T,
    pub y_witness: T,
    /// `(|F|, |G|)` at `(y_witness, rho)`.
    pub residuals: (T, T),
}

/// Builds `F` and `G` for the ray at angle `theta`.
pub fn build_ray_system<T: Real>(sf: &StabilityFunction<T>, theta: T) -> Result<RaySystem<T>, RayError> {
    let zero = T::zero();
    let i_pow = |k: usize| -> Complex<T> {
        match k % 4 {
            0 => Complex::new(T::one(), zero),
            1 => Complex::new(zero, T::one()),
            2 => Complex::new(-T::one(), zero),
            _ => Complex::new(zero, -T::one()),
        }
    };

    // q(iy) as a complex polynomial in y.
    let qc: Vec<Complex<T>> = sf.q().coeffs().iter().enumerate().map(|(k, &c)| i_pow(k) * c).collect();
    let q_iy = ComplexBiPoly::new(qc.len(), 1, qc);

    // (-1 + rho e^{i theta})^k expanded in rho, for k = 0..=deg_z2 p.
    let p = sf.p();
    let dk = p.deg_y();
    let e = Complex::new(theta.cos(), theta.sin());
    let shifted: Vec<Vec<Complex<T>>> = (0..=dk)
        .map(|k| {
            (0..=k)
                .map(|m| {
                    let sign = if (k - m) % 2 == 0 { T::one() } else { -T::one() };
                    e.powu(m as u32) * (binomial::<T>(k, m) * sign)
                })
                .collect()
        })
        .collect();

    // h(y, rho) = p(iy, -1 + rho e^{i theta}).
    let dj = p.deg_x();
    let mut h = vec![Complex::zero(); (dj + 1) * (dk + 1)];
    for j in 0..=dj {
        let ij = i_pow(j);
        for k in 0..=dk {
            let pjk = p.coeff(j, k);
            if pjk.is_zero() {
                continue;
            }
            for (m, &w) in shifted[k].iter().enumerate() {
                h[j * (dk + 1) + m] += ij * w * pjk;
            }
        }
    }
    let h = ComplexBiPoly::new(dj + 1, dk + 1, h);

    let fc = q_iy.mul(&q_iy.conj()).sub(&h.mul(&h.conj()));
    let residue = fc.imaginary_residue();
    if residue > T::tol(IMAG_RESIDUE_REL) {
        return Err(RayError::ImaginaryResidue {
            theta: theta.to_f64().unwrap_or(f64::NAN),
            residue: residue.to_f64().unwrap_or(f64::NAN),
        });
    }
    let f = fc.real_part().snapped(T::tol(F_SNAP_REL));
    let g = f.dx();
    Ok(RaySystem {
        theta,
        f_rho: f.dy(),
        g_y: g.dx(),
        g_rho: g.dy(),
        f,
        g,
        imag_residue: residue,
    })
}

/// `Res_y(F, G)` as a polynomial in `rho`, interpolated on `[0, rho_max]`.
pub fn resultant_in_rho<T: Real>(rs: &RaySystem<T>, rho_max: T) -> Result<UniPoly<T>, RayError> {
    resultant::Eliminator::new(rs)
        .ok_or(RayError::NoYDependence)?
        .global(rho_max)
}

/// Degree bound of the resultant in `rho`, or `None` when `F` is constant in `y`.
pub fn resultant_degree_bound<T: Real>(rs: &RaySystem<T>) -> Option<usize> {
    resultant::Eliminator::new(rs).map(|e| e.degree_bound())
}

/// Minimum of `F(., rho)` over real `y` and a minimizer.
///
/// Evaluates `F` at the real stationary points. When `F` does not depend on
/// `y` the value is `F(rho)` and the minimizer is reported as `0`.
pub fn min_f_over_y<T: Real>(rs: &RaySystem<T>, rho: T) -> Result<(T, T), RayError> {
    let fy = rs.f_at(rho);
    let n = match fy.degree() {
        None => return Ok((T::zero(), T::zero())),
        Some(0) => return Ok((fy.coeffs()[0], T::zero())),
        Some(n) => n,
    };
    if n % 2 == 1 || fy.leading() <= T::zero() {
        return Err(RayError::NotLStableAtInfinity {
            theta: rs.theta_f64(),
            rho: rho.to_f64().unwrap_or(f64::NAN),
        });
    }
    let stationary = real_roots(&fy.derivative())?;
    let mut best = (T::infinity(), T::zero());
    for y in stationary {
        let v = fy.eval(y);
        if v < best.0 {
            best = (v, y);
        }
    }
    Ok(best)
}

/// Smallest `rho` in `(RHO_EPS, rho_max]` with a real `y` solving `F = G = 0`.
pub fn smallest_valid_root<T: Real>(rs: &RaySystem<T>, rho_max: T) -> Result<RayRoot<T>, RayError> {
    let theta = rs.theta;
    let (center_min, center_y) = min_f_over_y(rs, T::zero())?;
    if center_min <= T::zero() {
        return Err(RayError::InteriorViolation {
            theta: rs.theta_f64(),
            y: center_y.to_f64().unwrap_or(f64::NAN),
            value: center_min.to_f64().unwrap_or(f64::NAN),
        });
    }
    let rho_eps = T::c(RHO_EPS);
    let no_root = || RayError::NoRootOnRay {
        theta: rs.theta_f64(),
        rho_max: rho_max.to_f64().unwrap_or(f64::NAN),
    };

    let Some(elim) = resultant::Eliminator::new(rs) else {
        // F depends on rho only: solve F(rho) = 0 directly.
        let radial = rs.f.x_coeff(0);
        let rho = real_roots(&radial)?
            .into_iter()
            .find(|&r| r > rho_eps && r <= rho_max)
            .ok_or_else(no_root)?;
        return Ok(RayRoot {
            theta,
            rho,
            y_witness: T::zero(),
            residuals: (radial.eval(rho).abs(), T::zero()),
        });
    };

    let tol = T::tol(VERIFY_REL) * rs.scale();
    let found = elim.ascending_roots(T::zero(), rho_max, |rho| {
        if rho <= rho_eps || rho > rho_max {
            return Ok(None);
        }
        verify_candidate(rs, rho, tol)
    })?;
    found.ok_or_else(no_root)
}

fn verify_candidate<T: Real>(rs: &RaySystem<T>, rho: T, tol: T) -> Result<Option<RayRoot<T>>, RayError> {
    let gy = rs.g_at(rho);
    if gy.is_zero() {
        return Ok(None);
    }
    let fy = rs.f_at(rho);
    let mut witnesses: Vec<(T, T)> = real_roots(&gy)?
        .into_iter()
        .map(|y| (fy.eval(y).abs(), y))
        .filter(|&(r, _)| r <= tol)
        .collect();
    witnesses.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite residuals"));

    let close = |r: T| (r - rho).abs() <= T::tol_sqrt(1e-6) * (T::one() + rho);
    let mut polished = witnesses.iter().filter_map(|&(_, y)| rs.polish(y, rho)).filter(|&(_, r)| close(r));
    let point = match polished.next() {
        Some(p) => Some(p),
        // Singular Jacobian (higher-order tangency): the resultant root is
        // only accurate to a root of eps, so bracket the membership flip.
        None => refine_by_bracket(rs, rho)?,
    };
    let Some((y, rho)) = point else {
        return Ok(None);
    };
    let residuals = (rs.f.eval(y, rho).abs(), rs.g.eval(y, rho).abs());
    Ok((residuals.0 <= tol && residuals.1 <= tol).then_some(RayRoot {
        theta: rs.theta,
        rho,
        y_witness: y,
        residuals,
    }))
}

/// Looks for `lo < rho < hi` with `min_y F(lo) >= 0 > min_y F(hi)` in widening
/// windows, then bisects to rounding level.
fn refine_by_bracket<T: Real>(rs: &RaySystem<T>, rho: T) -> Result<Option<(T, T)>, RayError> {
    let member = |r: T| min_f_over_y(rs, r).map(|(m, _)| m >= T::zero());
    for rel in [1e-8, 1e-6, 1e-4, 1e-3] {
        let d = T::c(rel) * (T::one() + rho);
        let (mut lo, mut hi) = (rho - d, rho + d);
        if lo <= T::c(RHO_EPS) || !member(lo)? || member(hi)? {
            continue;
        }
        while hi - lo > T::epsilon() * T::c(4.0) * hi {
            let mid = T::half() * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if member(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (_, y) = min_f_over_y(rs, lo)?;
        return Ok(Some((y, lo)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabfn::stability_polynomials;
    use crate::tableau::parse_tableau;

    fn euler_sf() -> StabilityFunction<f64> {
        stability_polynomials(&parse_tableau(r#"{"s":1,"A":[[1]],"w":[1],"B":[[0]],"omega":[1]}"#).unwrap()).unwrap()
    }

    fn rk3_sf() -> StabilityFunction<f64> {
        let t = parse_tableau(
            r#"{"s":3,"A":[[0,0,0],[0,0,0],[0,0,0]],"w":[0,0,0],
                "B":[[0,0,0],[0.3333333333333333,0,0],[0,0.6666666666666666,0]],
                "omega":[0.25,0,0.75]}"#,
        )
        .unwrap();
        stability_polynomials(&t).unwrap()
    }

    fn assert_bipoly(p: &BiPoly<f64>, want: &[Vec<f64>], tol: f64) {
        for (j, row) in want.iter().enumerate() {
            for (k, &w) in row.iter().enumerate() {
                assert!((p.coeff(j, k) - w).abs() <= tol, "coeff ({j},{k}) = {} want {w}", p.coeff(j, k));
            }
        }
        assert!(p.deg_x() < want.len() && p.deg_y() < want[0].len(), "{p:?}");
    }

    #[test]
    fn euler_ray_system() {
        let rs = build_ray_system(&euler_sf(), std::f64::consts::FRAC_PI_3).unwrap();
        // F = 1 + y^2 - rho^2, G = 2y
        assert_bipoly(rs.f(), &[vec![1.0, 0.0, -1.0], vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]], 1e-13);
        assert_bipoly(rs.g(), &[vec![0.0], vec![2.0]], 1e-13);
    }

    #[test]
    fn euler_ray_system_independent_of_theta() {
        let sf = euler_sf();
        let base = build_ray_system(&sf, 0.0).unwrap();
        for theta in [0.4, 1.9, 3.3, 5.5] {
            let rs = build_ray_system(&sf, theta).unwrap();
            assert_eq!(rs.f().deg_x(), base.f().deg_x());
            for j in 0..=2 {
                for k in 0..=2 {
                    assert!((rs.f().coeff(j, k) - base.f().coeff(j, k)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn explicit_scheme_has_no_y_dependence() {
        let rs = build_ray_system(&rk3_sf(), 1.0).unwrap();
        assert_eq!(rs.f().deg_x(), 0);
        assert!(rs.g().is_zero());
        assert!(matches!(resultant_in_rho(&rs, 10.0), Err(RayError::NoYDependence)));
    }

    #[test]
    fn euler_resultant() {
        let rs = build_ray_system(&euler_sf(), 0.7).unwrap();
        let res = resultant_in_rho(&rs, 10.0).unwrap();
        let want = [4.0, 0.0, -4.0];
        assert_eq!(res.coeffs().len(), 3);
        for (g, w) in res.coeffs().iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{res}");
        }
    }

    fn handmade(f: BiPoly<f64>) -> RaySystem<f64> {
        let g = f.dx();
        RaySystem {
            theta: 0.0,
            f_rho: f.dy(),
            g_y: g.dx(),
            g_rho: g.dy(),
            f,
            g,
            imag_residue: 0.0,
        }
    }

    #[test]
    fn resultant_proportional_to_rho() {
        // F = y^2 - rho, G = 2y: Res = -4 rho.
        let rs = handmade(BiPoly::from_rows(&[vec![0.0, -1.0], vec![0.0, 0.0], vec![1.0, 0.0]]));
        let res = resultant_in_rho(&rs, 5.0).unwrap();
        assert_eq!(res.degree(), Some(1));
        assert!(res.coeffs()[0].abs() < 1e-12);
        assert!((res.coeffs()[1] + 4.0).abs() < 1e-12);
    }

    #[test]
    fn shared_factor_resultant_vanishes() {
        // F = (y - rho)^2 = y^2 - 2 y rho + rho^2
        let rs = handmade(BiPoly::from_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, -2.0, 0.0], vec![1.0, 0.0, 0.0]]));
        assert_eq!(resultant_in_rho(&rs, 3.0), Err(RayError::ResultantVanishes));
    }

    #[test]
    fn euler_min_f() {
        let rs = build_ray_system(&euler_sf(), 2.0).unwrap();
        for (rho, want) in [(0.5, 0.75), (1.0, 0.0), (2.0, -3.0)] {
            let (m, y) = min_f_over_y(&rs, rho).unwrap();
            assert!((m - want).abs() < 1e-13, "rho {rho}: {m}");
            assert!(y.abs() < 1e-13);
        }
    }

    #[test]
    fn euler_smallest_root() {
        let sf = euler_sf();
        for k in 0..8 {
            let theta = std::f64::consts::TAU * k as f64 / 8.0;
            let r = smallest_valid_root(&build_ray_system(&sf, theta).unwrap(), 10.0).unwrap();
            assert!((r.rho - 1.0).abs() < 1e-12, "theta {theta}: {r:?}");
            assert!(r.y_witness.abs() < 1e-12);
        }
    }

    #[test]
    fn rk3_radial_roots() {
        let sf = rk3_sf();
        let r0 = smallest_valid_root(&build_ray_system(&sf, 0.0).unwrap(), 10.0).unwrap();
        assert!((r0.rho - 1.0).abs() < 1e-10, "{r0:?}");
        let rpi = smallest_valid_root(&build_ray_system(&sf, std::f64::consts::PI).unwrap(), 10.0).unwrap();
        assert!((rpi.rho - 1.5127).abs() < 1e-3, "{rpi:?}");
    }

    #[test]
    fn cap_below_boundary() {
        let rs = build_ray_system(&euler_sf(), 1.0).unwrap();
        assert!(matches!(smallest_valid_root(&rs, 0.5), Err(RayError::NoRootOnRay { .. })));
    }

    #[test]
    fn interior_violation() {
        // Forward/backward Euler with a huge explicit weight: R(0, -1) = 1 - 3 = -2.
        let t = parse_tableau(r#"{"s":1,"A":[[1]],"w":[1],"B":[[0]],"omega":[3]}"#).unwrap();
        let rs = build_ray_system(&stability_polynomials(&t).unwrap(), 0.3).unwrap();
        assert!(matches!(smallest_valid_root(&rs, 10.0), Err(RayError::InteriorViolation { .. })));
    }
}
