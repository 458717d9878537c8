//! Small dense row-major matrices and Gaussian elimination with partial pivoting.

use num_traits::Zero;

use crate::scalar::Entry;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense<E> {
    n: usize,
    data: Vec<E>,
}

impl<E: Entry> Dense<E> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![E::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = E::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Determinant by elimination. Consumes the matrix as scratch space.
    pub fn det(mut self) -> E {
        let n = self.n;
        det_in_place(&mut self.data, n)
    }

    /// Solves `self * X = rhs` for `rhs` given column by column.
    ///
    /// Returns `None` when a pivot is exactly zero or its magnitude falls below
    /// `pivot_floor` times the largest entry of the original matrix.
    pub fn solve_many(mut self, rhs: &mut [Vec<E>], pivot_floor: E::R) -> Option<()> {
        let n = self.n;
        let scale = self
            .data
            .iter()
            .map(|e| e.magnitude())
            .fold(E::R::zero(), |a, b| num_traits::Float::max(a, b));
        for col in 0..n {
            let pivot = self.pivot_row(col);
            let pv = self[(pivot, col)];
            if pv.magnitude().is_zero() || pv.magnitude() <= pivot_floor * scale {
                return None;
            }
            if pivot != col {
                self.swap_rows(pivot, col);
                for b in rhs.iter_mut() {
                    b.swap(pivot, col);
                }
            }
            for row in col + 1..n {
                let factor = self[(row, col)] / pv;
                if factor.magnitude().is_zero() {
                    continue;
                }
                for k in col + 1..n {
                    let v = self[(col, k)];
                    self[(row, k)] -= factor * v;
                }
                for b in rhs.iter_mut() {
                    let v = b[col];
                    b[row] -= factor * v;
                }
            }
        }
        for b in rhs.iter_mut() {
            for row in (0..n).rev() {
                let mut acc = b[row];
                for k in row + 1..n {
                    acc -= self[(row, k)] * b[k];
                }
                b[row] = acc / self[(row, row)];
            }
        }
        Some(())
    }

    pub fn solve(self, rhs: Vec<E>, pivot_floor: E::R) -> Option<Vec<E>> {
        let mut cols = vec![rhs];
        self.solve_many(&mut cols, pivot_floor)?;
        cols.pop()
    }

    fn pivot_row(&self, col: usize) -> usize {
        let mut best = col;
        let mut best_mag = self[(col, col)].magnitude();
        for row in col + 1..self.n {
            let m = self[(row, col)].magnitude();
            if m > best_mag {
                best = row;
                best_mag = m;
            }
        }
        best
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        let n = self.n;
        for k in 0..n {
            self.data.swap(a * n + k, b * n + k);
        }
    }
}

impl<E> std::ops::Index<(usize, usize)> for Dense<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.n + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Dense<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant of the row-major `n x n` matrix in `a` by partial-pivot LU.
/// `a` is overwritten.
pub fn det_in_place<E: Entry>(a: &mut [E], n: usize) -> E {
    let mut det = E::one();
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].magnitude();
        for row in col + 1..n {
            let m = a[row * n + col].magnitude();
            if m > best {
                best = m;
                pivot = row;
            }
        }
        if best.is_zero() {
            return E::zero();
        }
        if pivot != col {
            for k in col..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let pv = a[col * n + col];
        det *= pv;
        for row in col + 1..n {
            let factor = a[row * n + col] / pv;
            if factor.magnitude().is_zero() {
                continue;
            }
            for k in col + 1..n {
                let v = a[col * n + k];
                a[row * n + k] -= factor * v;
            }
        }
    }
    det
}
