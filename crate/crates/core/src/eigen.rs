//! Eigenvalues of real upper Hessenberg matrices.
//!
//! Balancing followed by the Francis double-shift QR iteration (the classic
//! EISPACK `balanc`/`hqr` pair). Companion and colleague matrices are already
//! Hessenberg, so no reduction step is needed.

use num_complex::Complex;

use crate::scalar::Real;

const MAX_ITERS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("QR iteration did not converge after {iterations} sweeps")]
pub struct EigenError {
    pub iterations: usize,
}

/// Row-major upper Hessenberg matrix used as QR workspace.
#[derive(Debug, Clone)]
pub struct Hessenberg<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Real> Hessenberg<T> {
    /// Wraps row-major data. Entries below the first subdiagonal are ignored.
    pub fn new(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n, "Hessenberg data must be n*n");
        Self { n, a: data }
    }

    // 1-based accessors keep the iteration close to its textbook form.
    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.a[(i - 1) * self.n + (j - 1)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.a[(i - 1) * self.n + (j - 1)]
    }

    /// Diagonal similarity by powers of two that equalises row and column norms.
    pub fn balance(&mut self) {
        let n = self.n;
        let radix = T::two();
        let sqrdx = radix * radix;
        let mut done = false;
        while !done {
            done = true;
            for i in 1..=n {
                let mut r = T::zero();
                let mut c = T::zero();
                for j in 1..=n {
                    if j != i {
                        c += self.at(j, i).abs();
                        r += self.at(i, j).abs();
                    }
                }
                if c.is_zero() || r.is_zero() {
                    continue;
                }
                let s = c + r;
                let mut f = T::one();
                let mut g = r / radix;
                while c < g {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= sqrdx;
                }
                if (c + r) / f < T::c(0.95) * s {
                    done = false;
                    let ginv = T::one() / f;
                    for j in 1..=n {
                        *self.at_mut(i, j) *= ginv;
                    }
                    for j in 1..=n {
                        *self.at_mut(j, i) *= f;
                    }
                }
            }
        }
    }

    /// All eigenvalues, in deflation order (not sorted).
    pub fn eigenvalues(mut self) -> Result<Vec<Complex<T>>, EigenError> {
        let n = self.n;
        let mut wr = vec![T::zero(); n + 1];
        let mut wi = vec![T::zero(); n + 1];
        if n == 0 {
            return Ok(Vec::new());
        }

        let mut anorm = T::zero();
        for i in 1..=n {
            for j in i.saturating_sub(1).max(1)..=n {
                anorm += self.at(i, j).abs();
            }
        }

        let mut nn = n;
        let mut t = T::zero();
        let (mut p, mut q, mut r): (T, T, T);
        let (mut x, mut y, mut z, mut w);
        let mut sweeps = 0usize;

        while nn >= 1 {
            let mut its = 0usize;
            loop {
                // Look for a single small subdiagonal element.
                let mut l = nn;
                while l >= 2 {
                    let mut s = self.at(l - 1, l - 1).abs() + self.at(l, l).abs();
                    if s.is_zero() {
                        s = anorm;
                    }
                    if self.at(l, l - 1).abs() + s == s {
                        *self.at_mut(l, l - 1) = T::zero();
                        break;
                    }
                    l -= 1;
                }
                x = self.at(nn, nn);
                if l == nn {
                    // One root found.
                    wr[nn] = x + t;
                    wi[nn] = T::zero();
                    nn -= 1;
                } else {
                    y = self.at(nn - 1, nn - 1);
                    w = self.at(nn, nn - 1) * self.at(nn - 1, nn);
                    if l == nn - 1 {
                        // Two roots found.
                        p = T::half() * (y - x);
                        q = p * p + w;
                        z = q.abs().sqrt();
                        x += t;
                        if q >= T::zero() {
                            z = p + z.copysign(p);
                            wr[nn - 1] = x + z;
                            wr[nn] = x + z;
                            if !z.is_zero() {
                                wr[nn] = x - w / z;
                            }
                            wi[nn - 1] = T::zero();
                            wi[nn] = T::zero();
                        } else {
                            wr[nn - 1] = x + p;
                            wr[nn] = x + p;
                            wi[nn - 1] = -z;
                            wi[nn] = z;
                        }
                        nn -= 2;
                    } else {
                        if its == MAX_ITERS_PER_EIGENVALUE {
                            return Err(EigenError { iterations: sweeps });
                        }
                        if its > 0 && its % 10 == 0 {
                            // Exceptional shift.
                            t += x;
                            for i in 1..=nn {
                                *self.at_mut(i, i) -= x;
                            }
                            let s = self.at(nn, nn - 1).abs() + self.at(nn - 1, nn - 2).abs();
                            x = T::c(0.75) * s;
                            y = x;
                            w = T::c(-0.4375) * s * s;
                        }
                        its += 1;
                        sweeps += 1;

                        // Look for two consecutive small subdiagonal elements.
                        let mut m = nn - 2;
                        loop {
                            z = self.at(m, m);
                            r = x - z;
                            let s0 = y - z;
                            p = (r * s0 - w) / self.at(m + 1, m) + self.at(m, m + 1);
                            q = self.at(m + 1, m + 1) - z - r - s0;
                            r = self.at(m + 2, m + 1);
                            let s = p.abs() + q.abs() + r.abs();
                            p /= s;
                            q /= s;
                            r /= s;
                            if m == l {
                                break;
                            }
                            let u = self.at(m, m - 1).abs() * (q.abs() + r.abs());
                            let v = p.abs()
                                * (self.at(m - 1, m - 1).abs() + z.abs() + self.at(m + 1, m + 1).abs());
                            if u + v == v {
                                break;
                            }
                            m -= 1;
                        }
                        for i in m + 2..=nn {
                            *self.at_mut(i, i - 2) = T::zero();
                            if i != m + 2 {
                                *self.at_mut(i, i - 3) = T::zero();
                            }
                        }

                        // Double QR step on rows l..nn and columns m..nn.
                        let mut k = m;
                        while k < nn {
                            if k != m {
                                p = self.at(k, k - 1);
                                q = self.at(k + 1, k - 1);
                                r = T::zero();
                                if k != nn - 1 {
                                    r = self.at(k + 2, k - 1);
                                }
                                x = p.abs() + q.abs() + r.abs();
                                if !x.is_zero() {
                                    p /= x;
                                    q /= x;
                                    r /= x;
                                }
                            }
                            let s = (p * p + q * q + r * r).sqrt().copysign(p);
                            if !s.is_zero() {
                                if k == m {
                                    if l != m {
                                        let v = self.at(k, k - 1);
                                        *self.at_mut(k, k - 1) = -v;
                                    }
                                } else {
                                    *self.at_mut(k, k - 1) = -s * x;
                                }
                                p += s;
                                x = p / s;
                                y = q / s;
                                z = r / s;
                                q /= p;
                                r /= p;
                                for j in k..=nn {
                                    p = self.at(k, j) + q * self.at(k + 1, j);
                                    if k != nn - 1 {
                                        p += r * self.at(k + 2, j);
                                        *self.at_mut(k + 2, j) -= p * z;
                                    }
                                    *self.at_mut(k + 1, j) -= p * y;
                                    *self.at_mut(k, j) -= p * x;
                                }
                                let mmin = if nn < k + 3 { nn } else { k + 3 };
                                for i in l..=mmin {
                                    p = x * self.at(i, k) + y * self.at(i, k + 1);
                                    if k != nn - 1 {
                                        p += z * self.at(i, k + 2);
                                        *self.at_mut(i, k + 2) -= p * r;
                                    }
                                    *self.at_mut(i, k + 1) -= p * q;
                                    *self.at_mut(i, k) -= p;
                                }
                            }
                            k += 1;
                        }
                    }
                }
                if nn < 2 || l >= nn - 1 {
                    break;
                }
            }
        }

        Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
    }
}
