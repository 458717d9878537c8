//! Elimination of `y` from `{F = 0, G = 0}` by the Sylvester resultant.
//!
//! The resultant is a polynomial in `rho` of known degree bound, so it is
//! recovered exactly (up to rounding) by sampling a determinant at Chebyshev
//! nodes. The Sylvester matrix is used for the resultant polynomial itself;
//! the root search samples the smaller Bezout matrix, whose determinant has
//! the same roots plus those of the leading `y`-coefficient of `F`.
//!
//! Root search works panel by panel on `[0, rho_max]`: each
//! panel holds its own Chebyshev interpolant, panels that provably contain no
//! root are skipped, and the rest are subdivided until the local series is
//! short enough for the colleague matrix. Candidates come out in ascending
//! order so the caller can stop at the first verified one.

use num_complex::Complex;
use num_traits::{One, Zero};
use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::cheb;
use crate::linalg::det_in_place;
use crate::poly::{BiPoly, UniPoly};
use crate::scalar::Real;

use super::roots::complex_roots;
use super::{RayError, RaySystem};

/// Radii, as fractions of the search interval, where a root shared by
/// `F(., rho)` and `G(., rho)` can only come from a common factor.
const GENERIC: [f64; 2] = [0.381_966_011_250_105, 0.723_606_797_749_979];
/// `|G|` at a root of `F` below this fraction of its term sizes is a shared
/// root. Shared roots are double roots of `F`, accurate to about `sqrt(eps)`.
const SHARED_ROOT_REL: f64 = 1e-6;
/// Chebyshev coefficients below this fraction of the panel maximum are noise.
const CHOP_REL: f64 = 1e-13;
/// Panels whose chopped series is at most this long are solved directly.
const LEAF_DEGREE: usize = 32;
const MAX_DEPTH: usize = 16;
/// Panels whose samples span more than this ratio are split even when the
/// series is short: colleague roots are only accurate relative to the
/// panel maximum, so small-valued stretches would lose their roots.
const DYNAMIC_RANGE: f64 = 1e6;
/// Slack on `[-1, 1]` when accepting colleague eigenvalues.
const EDGE_SLACK: f64 = 1e-9;
const LEAF_IMAG_KEEP: f64 = 1e-6;
/// Interior fractions of a panel probed before it is fully sampled.
const PROBE: [f64; 3] = [0.05, 0.5, 0.95];
/// Matrix sampled by the panel search. Its extra roots (zeros of the leading
/// `y`-coefficient) carry no real witness and fail verification.
const SEARCH: Form = Form::Bezout;

/// Which square matrix is sampled: the Sylvester matrix gives the resultant
/// itself, the Bezout matrix gives it times a power of the leading
/// `y`-coefficient of `F` at a fraction of the cost.
#[derive(Clone, Copy)]
enum Form {
    Sylvester,
    Bezout,
}

/// Reused buffers: coefficient values at `rho` and the matrix itself.
#[derive(Default)]
struct Scratch<T> {
    fv: Vec<T>,
    gv: Vec<T>,
    mat: Vec<T>,
}

/// Determinantal views of `Res_y(F, G)` along one ray.
pub(crate) struct Eliminator<T> {
    /// `y^j` coefficient of `F` as a polynomial in `rho`, `j = 0..=n`.
    f: Vec<UniPoly<T>>,
    /// Same for `G`, zero-padded to length `n + 1`.
    g: Vec<UniPoly<T>>,
    n: usize,
    m: usize,
    sylvester_bound: usize,
    bezout_bound: usize,
}

impl<T: Real> Eliminator<T> {
    /// `None` when `F` does not depend on `y`.
    pub fn new(rs: &RaySystem<T>) -> Option<Self> {
        let n = rs.f().deg_x();
        if n == 0 {
            return None;
        }
        let m = rs.g().deg_x();
        let coeffs = |p: &BiPoly<T>| (0..=n).map(|j| p.x_coeff(j)).collect();
        let mut e = Self {
            f: coeffs(rs.f()),
            g: coeffs(rs.g()),
            n,
            m,
            sylvester_bound: 0,
            bezout_bound: 0,
        };
        let formal = rs.f().deg_y() * m + rs.g().deg_y() * n;
        e.sylvester_bound = e.assignment_bound(Form::Sylvester).min(formal);
        e.bezout_bound = e.assignment_bound(Form::Bezout);
        Some(e)
    }

    /// Degree bound of the resultant in `rho`, never above the formal
    /// `deg_rho(F) deg_y(G) + deg_rho(G) deg_y(F)`.
    pub fn degree_bound(&self) -> usize {
        self.sylvester_bound
    }

    fn size(&self, form: Form) -> usize {
        match form {
            Form::Sylvester => self.n + self.m,
            Form::Bezout => self.n,
        }
    }

    fn bound(&self, form: Form) -> usize {
        match form {
            Form::Sylvester => self.sylvester_bound,
            Form::Bezout => self.bezout_bound,
        }
    }

    /// `deg det M(rho)` is at most the best sum of entry degree bounds over a
    /// permutation, a max-weight assignment.
    fn assignment_bound(&self, form: Form) -> usize {
        const ABSENT: i64 = -(1 << 20);
        let deg = |p: &UniPoly<T>| if p.is_zero() { ABSENT } else { p.degree().unwrap_or(0) as i64 };
        let df: Vec<i64> = self.f.iter().map(deg).collect();
        let dg: Vec<i64> = self.g.iter().map(deg).collect();
        let size = self.size(form);
        let mut w = Matrix::new(size, size, ABSENT);
        match form {
            Form::Sylvester => {
                for row in 0..self.m {
                    for k in 0..=self.n {
                        w[(row, row + k)] = df[self.n - k];
                    }
                }
                for row in 0..self.n {
                    for k in 0..=self.m {
                        w[(self.m + row, row + k)] = dg[self.m - k];
                    }
                }
            }
            Form::Bezout => {
                let n = self.n;
                for i in 0..n {
                    for j in 0..n {
                        let best = (0..=i.min(n - 1 - j))
                            .map(|k| (df[j + k + 1] + dg[i - k]).max(df[i - k] + dg[j + k + 1]))
                            .max()
                            .unwrap_or(ABSENT);
                        w[(i, j)] = best.max(ABSENT);
                    }
                }
            }
        }
        let (total, _) = kuhn_munkres(&w);
        usize::try_from(total).unwrap_or(0)
    }

    /// Fills `w.mat` with the row-major matrix of `form` at `rho`.
    fn matrix_into(&self, form: Form, rho: T, w: &mut Scratch<T>) {
        let n = self.n;
        w.fv.clear();
        w.fv.extend(self.f.iter().map(|c| c.eval(rho)));
        w.gv.clear();
        w.gv.extend(self.g.iter().map(|c| c.eval(rho)));
        let (fv, gv, s) = (&w.fv, &w.gv, &mut w.mat);
        let size = self.size(form);
        s.clear();
        s.resize(size * size, T::zero());
        match form {
            Form::Sylvester => {
                let m = self.m;
                for row in 0..m {
                    for k in 0..=n {
                        s[row * size + row + k] = fv[n - k];
                    }
                }
                for row in 0..n {
                    for k in 0..=m {
                        s[(m + row) * size + row + k] = gv[m - k];
                    }
                }
            }
            Form::Bezout => {
                // b_ij = b_{i-1, j+1} + f_{j+1} g_i - f_i g_{j+1}
                for i in 0..n {
                    for j in 0..n {
                        let prev = if i > 0 && j + 1 < n { s[(i - 1) * n + j + 1] } else { T::zero() };
                        s[i * n + j] = prev + fv[j + 1] * gv[i] - fv[i] * gv[j + 1];
                    }
                }
            }
        }
    }

    fn det(&self, form: Form, rho: T, w: &mut Scratch<T>) -> T {
        self.matrix_into(form, rho, w);
        det_in_place(&mut w.mat, self.size(form))
    }

    fn sample(&self, form: Form, a: T, b: T, scratch: &mut Scratch<T>) -> Vec<T> {
        cheb::nodes_on(self.bound(form) + 1, a, b)
            .into_iter()
            .map(|rho| self.det(form, rho, scratch))
            .collect()
    }

    /// `Res == 0` identically: `F` and `G` share a root at generic `rho`.
    fn shares_factor(&self, a: T, b: T) -> Result<bool, RayError> {
        for t in GENERIC {
            let rho = a + (b - a) * T::c(t);
            let f = UniPoly::new(self.f.iter().map(|c| c.eval(rho)).collect());
            let g: Vec<T> = self.g.iter().map(|c| c.eval(rho)).collect();
            let shared = complex_roots(&f)?.into_iter().any(|y| {
                let (mut val, mut size, mut yk) = (Complex::<T>::zero(), T::zero(), Complex::<T>::one());
                for &gk in &g {
                    val += yk * gk;
                    size += yk.norm() * gk.abs();
                    yk *= y;
                }
                val.norm() <= T::tol(SHARED_ROOT_REL) * size
            });
            if !shared {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The whole resultant on `[0, rho_max]` as monomial coefficients in `rho`.
    pub fn global(&self, rho_max: T) -> Result<UniPoly<T>, RayError> {
        if self.shares_factor(T::zero(), rho_max)? {
            return Err(RayError::ResultantVanishes);
        }
        let mut scratch = Scratch::default();
        let values = self.sample(Form::Sylvester, T::zero(), rho_max, &mut scratch);
        let c = cheb::coefficients(&values);
        Ok(cheb::to_monomial(&c, T::zero(), rho_max).snapped(T::tol(CHOP_REL)))
    }

    /// Visits the real roots of the resultant in `[a, b]` in ascending order
    /// until `visit` returns `Some`.
    pub fn ascending_roots<R>(
        &self,
        a: T,
        b: T,
        mut visit: impl FnMut(T) -> Result<Option<R>, RayError>,
    ) -> Result<Option<R>, RayError> {
        if self.shares_factor(a, b)? {
            return Err(RayError::ResultantVanishes);
        }
        let mut stack = vec![(a, b, 0usize)];
        let mut scratch = Scratch::default();
        while let Some((lo, hi, depth)) = stack.pop() {
            let at = |t: f64| lo + (hi - lo) * T::c(t);
            let probe = PROBE.map(|t| self.det(SEARCH, at(t), &mut scratch));
            // Cheap look before the full sample: most splits are decided here.
            if depth < MAX_DEPTH && spans_wide(&probe) {
                let mid = T::half() * (lo + hi);
                stack.push((mid, hi, depth + 1));
                stack.push((lo, mid, depth + 1));
                continue;
            }
            let values = self.sample(SEARCH, lo, hi, &mut scratch);
            let c = cheb::coefficients(&values);
            if excludes_roots(&c) {
                continue;
            }
            let eff = cheb::effective_degree(&c, T::tol(CHOP_REL));
            if eff == 0 {
                continue;
            }
            if (eff > LEAF_DEGREE || spans_wide(&values)) && depth < MAX_DEPTH {
                let mid = T::half() * (lo + hi);
                stack.push((mid, hi, depth + 1));
                stack.push((lo, mid, depth + 1));
                continue;
            }
            for rho in leaf_roots(&c[..=eff], &c, lo, hi)? {
                if let Some(found) = visit(rho)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }
}

/// Whether the magnitudes in `values` span more than [`DYNAMIC_RANGE`].
fn spans_wide<T: Real>(values: &[T]) -> bool {
    let (vmin, vmax) = values
        .iter()
        .fold((T::infinity(), T::zero()), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
    vmax > T::c(DYNAMIC_RANGE) * vmin
}

/// `|c_0| > sum_{k>=1} |c_k|` rules out zeros on `[-1, 1]`.
fn excludes_roots<T: Real>(c: &[T]) -> bool {
    let tail: T = c.iter().skip(1).map(|v| v.abs()).sum();
    let head = c[0].abs();
    head - tail > T::tol(1e-12) * (head + tail)
}

fn leaf_roots<T: Real>(chopped: &[T], full: &[T], lo: T, hi: T) -> Result<Vec<T>, RayError> {
    let keep = T::tol_sqrt(LEAF_IMAG_KEEP);
    let slack = T::one() + T::c(EDGE_SLACK);
    let dc = cheb::derivative(full);
    let mut out: Vec<T> = cheb::colleague_roots(chopped)?
        .into_iter()
        .filter(|z| z.im.abs() <= keep && z.re.abs() <= slack)
        .map(|z| {
            let mut x = z.re;
            for _ in 0..3 {
                let d = cheb::eval(&dc, x);
                if d.is_zero() {
                    break;
                }
                let step = cheb::eval(full, x) / d;
                let next = x - step;
                if !next.is_finite() || next.abs() > slack {
                    break;
                }
                x = next;
            }
            cheb::to_interval(x.max(-T::one()).min(T::one()), lo, hi)
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(out)
}

