//! Dense polynomials in one and two variables.

use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{Entry, Real};

/// Univariate polynomial `sum c_k x^k`, coefficients stored low to high.
///
/// Trailing zeros are trimmed on construction; the zero polynomial is `[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Real> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![T::zero()])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        let mut c = vec![T::one()];
        for &r in roots {
            let mut next = vec![T::zero(); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> T {
        *self.coeffs.last().expect("non-empty")
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::usize(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Zeroes coefficients smaller than `rel * scale()`.
    pub fn snapped(&self, rel: T) -> Self {
        let cut = rel * self.scale();
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() < cut { T::zero() } else { c })
                .collect(),
        )
    }
}

impl<T: Real> fmt::Display for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Dense bivariate polynomial `sum c_jk x^j y^k`.
///
/// Entry `(j, k)` multiplies `x^j y^k`. Trailing all-zero rows and columns are
/// trimmed on construction, so `deg_x`/`deg_y` are the true degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<E> {
    rows: usize,
    cols: usize,
    coeffs: Vec<E>,
}

/// Complex-coefficient bivariate polynomial in two real variables.
pub type ComplexBiPoly<T> = BiPoly<Complex<T>>;

impl<E: Entry> BiPoly<E> {
    /// Builds from row-major `(deg_x + 1) x (deg_y + 1)` data.
    pub fn new(rows: usize, cols: usize, coeffs: Vec<E>) -> Self {
        assert!(rows > 0 && cols > 0, "BiPoly needs at least one coefficient");
        assert_eq!(coeffs.len(), rows * cols, "coefficient count mismatch");
        let mut p = Self { rows, cols, coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self::new(1, 1, vec![E::zero()])
    }

    pub fn from_rows(rows: &[Vec<E>]) -> Self {
        let cols = rows.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let mut data = vec![E::zero(); rows.len().max(1) * cols];
        for (j, row) in rows.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                data[j * cols + k] = c;
            }
        }
        Self::new(rows.len().max(1), cols, data)
    }

    fn trim(&mut self) {
        let is_zero = |e: &E| e.magnitude().is_zero();
        let mut rows = self.rows;
        while rows > 1 && (0..self.cols).all(|k| is_zero(&self.coeffs[(rows - 1) * self.cols + k])) {
            rows -= 1;
        }
        let mut cols = self.cols;
        while cols > 1 && (0..rows).all(|j| is_zero(&self.coeffs[j * self.cols + cols - 1])) {
            cols -= 1;
        }
        if rows != self.rows || cols != self.cols {
            let mut data = Vec::with_capacity(rows * cols);
            for j in 0..rows {
                data.extend_from_slice(&self.coeffs[j * self.cols..j * self.cols + cols]);
            }
            self.rows = rows;
            self.cols = cols;
            self.coeffs = data;
        }
    }

    pub fn deg_x(&self) -> usize {
        self.rows - 1
    }

    pub fn deg_y(&self) -> usize {
        self.cols - 1
    }

    pub fn coeff(&self, j: usize, k: usize) -> E {
        if j < self.rows && k < self.cols {
            self.coeffs[j * self.cols + k]
        } else {
            E::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.magnitude().is_zero())
    }

    /// Row-major coefficient table, rows indexed by the power of `x`.
    pub fn rows(&self) -> Vec<Vec<E>> {
        self.coeffs.chunks(self.cols).map(<[E]>::to_vec).collect()
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> E::R {
        self.coeffs
            .iter()
            .fold(E::R::zero(), |m, c| num_traits::Float::max(m, c.magnitude()))
    }

    pub fn map<F: Entry>(&self, f: impl Fn(E) -> F) -> BiPoly<F> {
        BiPoly::new(self.rows, self.cols, self.coeffs.iter().map(|&c| f(c)).collect())
    }

    pub fn eval(&self, x: E, y: E) -> E {
        let mut acc = E::zero();
        for j in (0..self.rows).rev() {
            let mut row = E::zero();
            for k in (0..self.cols).rev() {
                row = row * y + self.coeffs[j * self.cols + k];
            }
            acc = acc * x + row;
        }
        acc
    }

    /// `d/dx`.
    pub fn dx(&self) -> Self {
        if self.rows == 1 {
            return Self::zero();
        }
        let rows = self.rows - 1;
        let mut data = Vec::with_capacity(rows * self.cols);
        for j in 1..self.rows {
            let f = factor::<E>(j);
            for k in 0..self.cols {
                data.push(self.coeffs[j * self.cols + k] * f);
            }
        }
        Self::new(rows, self.cols, data)
    }

    /// `d/dy`.
    pub fn dy(&self) -> Self {
        if self.cols == 1 {
            return Self::zero();
        }
        let cols = self.cols - 1;
        let mut data = Vec::with_capacity(self.rows * cols);
        for j in 0..self.rows {
            for k in 1..self.cols {
                data.push(self.coeffs[j * self.cols + k] * factor::<E>(k));
            }
        }
        Self::new(self.rows, cols, data)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rows = self.rows + other.rows - 1;
        let cols = self.cols + other.cols - 1;
        let mut data = vec![E::zero(); rows * cols];
        for j1 in 0..self.rows {
            for k1 in 0..self.cols {
                let a = self.coeffs[j1 * self.cols + k1];
                if a.magnitude().is_zero() {
                    continue;
                }
                for j2 in 0..other.rows {
                    for k2 in 0..other.cols {
                        data[(j1 + j2) * cols + k1 + k2] += a * other.coeffs[j2 * other.cols + k2];
                    }
                }
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let data = (0..rows * cols)
            .map(|idx| {
                let (j, k) = (idx / cols, idx % cols);
                self.coeff(j, k) - other.coeff(j, k)
            })
            .collect();
        Self::new(rows, cols, data)
    }

    /// Coefficients of `x^0..=x^deg_x` as polynomials in `y`, evaluated at `y`.
    pub fn coeffs_in_x_at(&self, y: E) -> Vec<E> {
        (0..self.rows)
            .map(|j| {
                (0..self.cols)
                    .rev()
                    .fold(E::zero(), |acc, k| acc * y + self.coeffs[j * self.cols + k])
            })
            .collect()
    }

    /// Coefficients of `y^0..=y^deg_y` as polynomials in `x`, evaluated at `x`.
    pub fn coeffs_in_y_at(&self, x: E) -> Vec<E> {
        (0..self.cols)
            .map(|k| {
                (0..self.rows)
                    .rev()
                    .fold(E::zero(), |acc, j| acc * x + self.coeffs[j * self.cols + k])
            })
            .collect()
    }
}

fn factor<E: Entry>(n: usize) -> E {
    let mut f = E::zero();
    for _ in 0..n {
        f += E::one();
    }
    f
}

impl<T: Real> BiPoly<T> {
    /// `p(x, .)` as a univariate polynomial in `y`.
    pub fn at_x(&self, x: T) -> UniPoly<T> {
        UniPoly::new(self.coeffs_in_y_at(x))
    }

    /// `p(., y)` as a univariate polynomial in `x`.
    pub fn at_y(&self, y: T) -> UniPoly<T> {
        UniPoly::new(self.coeffs_in_x_at(y))
    }

    /// Coefficient of `x^j` as a polynomial in `y`.
    pub fn x_coeff(&self, j: usize) -> UniPoly<T> {
        if j >= self.rows {
            return UniPoly::zero();
        }
        UniPoly::new(self.coeffs[j * self.cols..(j + 1) * self.cols].to_vec())
    }

    /// Coefficient of `y^k` as a polynomial in `x`.
    pub fn y_coeff(&self, k: usize) -> UniPoly<T> {
        if k >= self.cols {
            return UniPoly::zero();
        }
        UniPoly::new((0..self.rows).map(|j| self.coeffs[j * self.cols + k]).collect())
    }

    pub fn eval_complex(&self, x: Complex<T>, y: Complex<T>) -> Complex<T> {
        let mut acc = Complex::zero();
        for j in (0..self.rows).rev() {
            let mut row = Complex::zero();
            for k in (0..self.cols).rev() {
                row = row * y + self.coeffs[j * self.cols + k];
            }
            acc = acc * x + row;
        }
        acc
    }

    /// Zeroes coefficients smaller than `rel * scale()`.
    pub fn snapped(&self, rel: T) -> Self {
        let cut = rel * self.scale();
        self.map(|c| if c.abs() < cut { T::zero() } else { c })
    }

    pub fn to_complex(&self) -> ComplexBiPoly<T> {
        self.map(|c| Complex::new(c, T::zero()))
    }
}

impl<T: Real> ComplexBiPoly<T> {
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// Largest imaginary part relative to the coefficient scale.
    pub fn imaginary_residue(&self) -> T {
        let scale = self.scale();
        if scale.is_zero() {
            return T::zero();
        }
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.im.abs())) / scale
    }

    pub fn real_part(&self) -> BiPoly<T> {
        self.map(|c| c.re)
    }
}

impl<T: Real> From<UniPoly<T>> for BiPoly<T> {
    /// Embeds a polynomial in `x` with no `y` dependence.
    fn from(p: UniPoly<T>) -> Self {
        let n = p.coeffs.len();
        BiPoly::new(n, 1, p.coeffs)
    }
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub(crate) fn binomial<T: Real>(n: usize, k: usize) -> T {
    let mut acc = 1.0f64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    T::c(acc.round())
}
