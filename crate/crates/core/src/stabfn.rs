//! Stability function `R(z1, z2) = p(z1, z2) / q(z1)` of an IMEX pair.
//!
//! `p` is the determinant of `I - z1 A - z2 B + z1 e w^T + z2 e omega^T` and
//! `q` the determinant of `I - z1 A`, with `e` the all-ones vector. Both are
//! recovered as explicit coefficient arrays by sampling the determinants on a
//! Chebyshev tensor grid and solving the Vandermonde systems.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cheb;
use crate::linalg::Dense;
use crate::poly::{BiPoly, UniPoly};
use crate::scalar::Real;
use crate::tableau::ImexTableau;

/// Half-width of the sampling square `[-2, 2]^2`.
const GRID_HALF_WIDTH: f64 = 2.0;
/// Coefficients below this fraction of the largest are snapped to zero.
const SNAP_REL: f64 = 1e-12;
/// Pole threshold on `|q(z1)|`.
const POLE_FLOOR: f64 = 1e-300;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StabFnError {
    #[error("interpolation system is numerically singular")]
    Conditioning,
    #[error("z1 = {z1} is a pole of R (|q(z1)| = {modulus:e})")]
    Pole { z1: String, modulus: f64 },
    #[error("stage system is singular at (z1, z2) = ({z1}, {z2})")]
    SingularStageSystem { z1: String, z2: String },
    #[error("q has degree 0: R does not depend on z1 and has no stiff limit")]
    NoStiffDependence,
}

/// The polynomial pair `(p, q)` defining `R = p / q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityFunction<T> {
    p: BiPoly<T>,
    q: UniPoly<T>,
    s: usize,
}

impl<T: Real> StabilityFunction<T> {
    /// Wraps explicit polynomials. `p` is in `(z1, z2)`, `q` in `z1`.
    pub fn from_parts(p: BiPoly<T>, q: UniPoly<T>, s: usize) -> Self {
        Self { p, q, s }
    }

    pub fn p(&self) -> &BiPoly<T> {
        &self.p
    }

    pub fn q(&self) -> &UniPoly<T> {
        &self.q
    }

    pub fn stages(&self) -> usize {
        self.s
    }

    pub fn eval_r(&self, z1: Complex<T>, z2: Complex<T>) -> Result<Complex<T>, StabFnError> {
        let den = self.q.eval_complex(z1);
        let floor = T::c(POLE_FLOOR).max(T::min_positive_value());
        if den.norm() < floor {
            return Err(StabFnError::Pole {
                z1: format!("{z1}"),
                modulus: den.norm().to_f64().unwrap_or(0.0),
            });
        }
        Ok(self.p.eval_complex(z1, z2) / den)
    }

    /// `lim |z1| -> inf` of `R(z1, z2)`.
    ///
    /// Zero when `p` has lower `z1`-degree than `q`, the ratio of leading
    /// `z1`-coefficients when the degrees match, and complex infinity when
    /// `p` outgrows `q`.
    pub fn stiff_limit(&self, z2: Complex<T>) -> Result<Complex<T>, StabFnError> {
        let n = match self.q.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(StabFnError::NoStiffDependence),
        };
        let dp = self.p.deg_x();
        Ok(match dp.cmp(&n) {
            std::cmp::Ordering::Less => Complex::zero(),
            std::cmp::Ordering::Equal => self.p.x_coeff(n).eval_complex(z2) / self.q.leading(),
            std::cmp::Ordering::Greater => Complex::new(T::infinity(), T::zero()),
        })
    }
}

/// `I - z1 A - z2 B + z1 e w^T + z2 e omega^T`.
pub fn p_matrix<T: Real>(t: &ImexTableau<T>, z1: Complex<T>, z2: Complex<T>) -> Dense<Complex<T>> {
    Dense::from_fn(t.stages(), |i, j| {
        let id = if i == j { Complex::<T>::one() } else { Complex::<T>::zero() };
        id - z1 * t.a(i, j) - z2 * t.b(i, j) + z1 * t.w()[j] + z2 * t.omega()[j]
    })
}

/// `I - z1 A`.
pub fn q_matrix<T: Real>(t: &ImexTableau<T>, z1: Complex<T>) -> Dense<Complex<T>> {
    Dense::from_fn(t.stages(), |i, j| {
        let id = if i == j { Complex::<T>::one() } else { Complex::<T>::zero() };
        id - z1 * t.a(i, j)
    })
}

/// Direct numeric determinant defining `p`.
pub fn direct_p<T: Real>(t: &ImexTableau<T>, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
    p_matrix(t, z1, z2).det()
}

/// Direct numeric determinant defining `q`.
pub fn direct_q<T: Real>(t: &ImexTableau<T>, z1: Complex<T>) -> Complex<T> {
    q_matrix(t, z1).det()
}

/// Extracts `p` and `q` as coefficient arrays.
pub fn stability_polynomials<T: Real>(t: &ImexTableau<T>) -> Result<StabilityFunction<T>, StabFnError> {
    let s = t.stages();
    let n = s + 1;
    let half = T::c(GRID_HALF_WIDTH);
    let xs: Vec<T> = cheb::nodes::<T>(n).into_iter().map(|x| x * half).collect();
    let re = |x: T| Complex::new(x, T::zero());

    let q_vals: Vec<T> = xs.iter().map(|&x| direct_q(t, re(x)).re).collect();
    let mut q_rhs = vec![q_vals];
    vandermonde(&xs).solve_many(&mut q_rhs, pivot_floor::<T>()).ok_or(StabFnError::Conditioning)?;
    let mut q_coeffs = q_rhs.pop().expect("one column");
    // Constant terms are det(I); take them exact instead of interpolated.
    let zero = re(T::zero());
    q_coeffs[0] = direct_q(t, zero).re;
    let q = UniPoly::new(q_coeffs).snapped(T::c(SNAP_REL));

    // D[i][k] = p(x_i, x_k) = sum_jl C[j][l] x_i^j x_k^l, i.e. D = V C V^T.
    let mut cols: Vec<Vec<T>> = (0..n)
        .map(|k| xs.iter().map(|&xi| direct_p(t, re(xi), re(xs[k])).re).collect())
        .collect();
    vandermonde(&xs).solve_many(&mut cols, pivot_floor::<T>()).ok_or(StabFnError::Conditioning)?;
    // cols[k][j] = X[j][k] with X = V^{-1} D. Now solve V C^T = X^T.
    let mut rows: Vec<Vec<T>> = (0..n).map(|j| (0..n).map(|k| cols[k][j]).collect()).collect();
    vandermonde(&xs).solve_many(&mut rows, pivot_floor::<T>()).ok_or(StabFnError::Conditioning)?;
    // rows[j][l] = C[j][l]
    let mut data: Vec<T> = rows.into_iter().flatten().collect();
    data[0] = direct_p(t, zero, zero).re;
    let p = BiPoly::new(n, n, data).snapped(T::c(SNAP_REL));

    Ok(StabilityFunction { p, q, s })
}

fn vandermonde<T: Real>(xs: &[T]) -> Dense<T> {
    Dense::from_fn(xs.len(), |i, j| xs[i].powi(j as i32))
}

fn pivot_floor<T: Real>() -> T {
    T::epsilon() * T::c(16.0)
}

/// One step of the IMEX pair applied to `u' = lambda1 u + lambda2 u` from
/// `u = 1`, with `z1 = lambda1 dt` treated implicitly and `z2 = lambda2 dt`
/// explicitly.
///
/// Solves `(I - z1 A - z2 B) U = e` for the stage values and returns
/// `1 + (z1 w + z2 omega) . U`. Independent of the determinant route.
pub fn scalar_step<T: Real>(t: &ImexTableau<T>, z1: Complex<T>, z2: Complex<T>) -> Result<Complex<T>, StabFnError> {
    let s = t.stages();
    let m = Dense::from_fn(s, |i, j| {
        let id = if i == j { Complex::<T>::one() } else { Complex::<T>::zero() };
        id - z1 * t.a(i, j) - z2 * t.b(i, j)
    });
    let stages = m
        .solve(vec![Complex::one(); s], T::epsilon())
        .ok_or_else(|| StabFnError::SingularStageSystem {
            z1: format!("{z1}"),
            z2: format!("{z2}"),
        })?;
    let mut out = Complex::one();
    for (i, u) in stages.iter().enumerate() {
        out += (z1 * t.w()[i] + z2 * t.omega()[i]) * u;
    }
    Ok(out)
}
