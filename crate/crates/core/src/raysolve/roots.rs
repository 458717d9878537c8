//! Real roots of a univariate polynomial from companion-matrix eigenvalues.

use num_complex::Complex;

use crate::eigen::Hessenberg;
use crate::poly::UniPoly;
use crate::scalar::Real;

use super::RayError;

/// Eigenvalues with `|im| <= IMAG_KEEP * (1 + |re|)` count as real.
const IMAG_KEEP: f64 = 1e-7;

/// All real roots in ascending order.
///
/// Eigenvalues of the balanced companion matrix of the monic normalization,
/// filtered to the (numerically) real ones and refined by one Newton step.
pub fn real_roots<T: Real>(u: &UniPoly<T>) -> Result<Vec<T>, RayError> {
    let eig = complex_roots(u)?;
    let keep = T::tol_sqrt(IMAG_KEEP);
    let du = u.derivative();
    let mut roots: Vec<T> = eig
        .into_iter()
        .filter(|z| z.im.abs() <= keep * (T::one() + z.re.abs()))
        .map(|z| newton_step(u, &du, z.re))
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(roots)
}

/// All complex roots, from the balanced companion matrix, unrefined.
pub(crate) fn complex_roots<T: Real>(u: &UniPoly<T>) -> Result<Vec<Complex<T>>, RayError> {
    let n = match u.degree() {
        None => return Err(RayError::ZeroPolynomial),
        Some(0) => return Ok(Vec::new()),
        Some(n) => n,
    };
    let c = u.coeffs();
    let lead = u.leading();
    let mut h = vec![T::zero(); n * n];
    for j in 0..n {
        h[j] = -c[n - 1 - j] / lead;
    }
    for i in 1..n {
        h[i * n + i - 1] = T::one();
    }
    let mut hm = Hessenberg::new(n, h);
    hm.balance();
    Ok(hm.eigenvalues()?)
}

fn newton_step<T: Real>(u: &UniPoly<T>, du: &UniPoly<T>, x: T) -> T {
    let fx = u.eval(x);
    let dfx = du.eval(x);
    if dfx.is_zero() {
        return x;
    }
    let next = x - fx / dfx;
    if next.is_finite() && u.eval(next).abs() <= fx.abs() {
        next
    } else {
        x
    }
}
