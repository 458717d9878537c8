//! Chebyshev interpolation on an interval and colleague-matrix root finding.

use num_complex::Complex;

use crate::eigen::{EigenError, Hessenberg};
use crate::poly::UniPoly;
use crate::scalar::Real;

/// First-kind Chebyshev nodes `cos(pi (j + 1/2) / n)` on `[-1, 1]`, descending.
pub fn nodes<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|j| (T::pi() * (T::usize(j) + T::half()) / T::usize(n)).cos())
        .collect()
}

/// First-kind nodes mapped affinely onto `[a, b]`.
pub fn nodes_on<T: Real>(n: usize, a: T, b: T) -> Vec<T> {
    nodes::<T>(n).into_iter().map(|x| to_interval(x, a, b)).collect()
}

#[inline]
pub fn to_interval<T: Real>(x: T, a: T, b: T) -> T {
    T::half() * (a + b) + T::half() * (b - a) * x
}

#[inline]
pub fn from_interval<T: Real>(t: T, a: T, b: T) -> T {
    (T::two() * t - (a + b)) / (b - a)
}

/// Chebyshev coefficients of the degree `n - 1` interpolant through values
/// sampled at [`nodes`]`(n)`.
pub fn coefficients<T: Real>(values: &[T]) -> Vec<T> {
    let n = values.len();
    let nn = T::usize(n);
    let mut c = vec![T::zero(); n];
    // T_k(x_j) by the three-term recurrence, accumulated node by node.
    for (&f, x) in values.iter().zip(nodes::<T>(n)) {
        let mut t_prev = T::one();
        let mut t_cur = x;
        for (k, ck) in c.iter_mut().enumerate() {
            let tk = match k {
                0 => T::one(),
                1 => x,
                _ => {
                    let next = T::two() * x * t_cur - t_prev;
                    t_prev = t_cur;
                    t_cur = next;
                    next
                }
            };
            *ck += f * tk;
        }
    }
    for (k, ck) in c.iter_mut().enumerate() {
        *ck = *ck * T::two() / nn;
        if k == 0 {
            *ck = *ck * T::half();
        }
    }
    c
}

/// Clenshaw evaluation of `sum c_k T_k(x)`.
pub fn eval<T: Real>(c: &[T], x: T) -> T {
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    for &ck in c.iter().skip(1).rev() {
        let b0 = T::two() * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c.first().copied().unwrap_or_else(T::zero)
}

/// Chebyshev coefficients of the derivative with respect to `x`.
pub fn derivative<T: Real>(c: &[T]) -> Vec<T> {
    let n = c.len();
    if n <= 1 {
        return vec![T::zero()];
    }
    let mut d = vec![T::zero(); n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + T::two() * T::usize(k) * c[k];
    }
    d[0] = d[0] * T::half();
    d.truncate(n - 1);
    d
}

/// Index of the last coefficient above `rel` times the largest one.
pub fn effective_degree<T: Real>(c: &[T], rel: T) -> usize {
    let scale = c.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let cut = rel * scale;
    c.iter().rposition(|v| v.abs() > cut).unwrap_or(0)
}

/// Roots of `sum_{k<=deg} c_k T_k(x)` via the colleague matrix.
///
/// Coefficients past `c.len()` are taken to be zero; the series is assumed to
/// be already truncated so that the last coefficient is nonzero.
pub fn colleague_roots<T: Real>(c: &[T]) -> Result<Vec<Complex<T>>, EigenError> {
    let n = c.len().saturating_sub(1);
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex::new(-c[0] / c[1], T::zero())]),
        _ => {}
    }
    let lead = c[n];
    // Transposed colleague matrix: upper Hessenberg with a dense last column.
    let mut h = vec![T::zero(); n * n];
    let idx = |i: usize, j: usize| i * n + j;
    h[idx(1, 0)] = T::one();
    for k in 1..n {
        if k + 1 < n {
            h[idx(k + 1, k)] = T::half();
        }
        h[idx(k - 1, k)] = T::half();
    }
    for j in 0..n {
        h[idx(j, n - 1)] -= c[j] / (T::two() * lead);
    }
    let mut hm = Hessenberg::new(n, h);
    hm.balance();
    hm.eigenvalues()
}

/// Converts a Chebyshev series on `[a, b]` into monomial coefficients in `t`.
pub fn to_monomial<T: Real>(c: &[T], a: T, b: T) -> UniPoly<T> {
    // x(t) = alpha t + beta maps [a, b] onto [-1, 1].
    let alpha = T::two() / (b - a);
    let beta = -(a + b) / (b - a);
    let x = UniPoly::new(vec![beta, alpha]);
    let mut t_prev = UniPoly::new(vec![T::one()]);
    let mut t_cur = x.clone();
    let mut acc = vec![T::zero(); c.len().max(1)];
    for (k, &ck) in c.iter().enumerate() {
        let basis = match k {
            0 => t_prev.clone(),
            1 => t_cur.clone(),
            _ => {
                let next = add(&x.mul(&t_cur).scaled(T::two()), &t_prev.scaled(-T::one()));
                t_prev = std::mem::replace(&mut t_cur, next);
                t_cur.clone()
            }
        };
        for (i, &b) in basis.coeffs().iter().enumerate() {
            acc[i] += ck * b;
        }
    }
    UniPoly::new(acc)
}

fn add<T: Real>(p: &UniPoly<T>, q: &UniPoly<T>) -> UniPoly<T> {
    let n = p.coeffs().len().max(q.coeffs().len());
    UniPoly::new(
        (0..n)
            .map(|i| {
                p.coeffs().get(i).copied().unwrap_or_else(T::zero)
                    + q.coeffs().get(i).copied().unwrap_or_else(T::zero)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_polynomial() {
        let p = UniPoly::new(vec![1.0, -2.0, 0.5, 3.0]);
        let (a, b) = (-0.5, 4.0);
        let xs = nodes_on(4, a, b);
        let vals: Vec<f64> = xs.iter().map(|&x| p.eval(x)).collect();
        let c = coefficients(&vals);
        for t in [-0.5, 0.0, 1.3, 4.0] {
            let got = eval(&c, from_interval(t, a, b));
            assert!((got - p.eval(t)).abs() < 1e-12, "{got} vs {}", p.eval(t));
        }
        let back = to_monomial(&c, a, b);
        for (g, w) in back.coeffs().iter().zip(p.coeffs()) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn colleague_finds_roots_inside_interval() {
        // (x - 0.25)(x + 0.5)(x - 0.9) in Chebyshev form via sampling.
        let p = UniPoly::from_roots(&[0.25, -0.5, 0.9]);
        let xs = nodes::<f64>(4);
        let vals: Vec<f64> = xs.iter().map(|&x| p.eval(x)).collect();
        let c = coefficients(&vals);
        let mut roots: Vec<f64> = colleague_roots(&c).unwrap().iter().map(|z| z.re).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (r, w) in roots.iter().zip([-0.5, 0.25, 0.9]) {
            assert!((r - w).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_series() {
        let p = UniPoly::new(vec![0.3, -1.0, 2.0, 0.0, 0.75]);
        let vals: Vec<f64> = nodes::<f64>(5).iter().map(|&x| p.eval(x)).collect();
        let d = derivative(&coefficients(&vals));
        let dp = p.derivative();
        for x in [-1.0, -0.3, 0.2, 0.9] {
            assert!((eval(&d, x) - dp.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_series() {
        let r = colleague_roots(&[0.5f64, 2.0]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re + 0.25).abs() < 1e-15);
    }
}
