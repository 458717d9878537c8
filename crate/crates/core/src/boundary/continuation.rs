//! Predictor-corrector tracking of one branch of `F = G = 0` in `theta`.

use num_complex::Complex;

use crate::poly::{BiPoly, UniPoly};
use crate::raysolve::{build_ray_system, smallest_valid_root, RayError};
use crate::scalar::Real;
use crate::stabfn::StabilityFunction;

use super::{BoundaryCurve, BoundaryError, BoundaryPoint, Method, MIN_SAMPLES};

const NEWTON_ITERS: usize = 20;
const NEWTON_REL: f64 = 1e-12;

/// Values and first derivatives of `F` and `G = dF/dy` at `(y, rho, theta)`.
#[derive(Debug, Clone, Copy)]
struct Jet<T> {
    f: T,
    g: T,
    f_y: T,
    f_rho: T,
    f_theta: T,
    g_y: T,
    g_rho: T,
    g_theta: T,
}

/// `p`, `q` and the partial derivatives the jet needs, evaluated directly in
/// complex arithmetic instead of through the expanded ray polynomials.
struct Derivs<T> {
    p: BiPoly<T>,
    p_u: BiPoly<T>,
    p_v: BiPoly<T>,
    p_uu: BiPoly<T>,
    p_uv: BiPoly<T>,
    q: UniPoly<T>,
    q1: UniPoly<T>,
    q2: UniPoly<T>,
}

impl<T: Real> Derivs<T> {
    fn new(sf: &StabilityFunction<T>) -> Self {
        let p = sf.p().clone();
        let p_u = p.dx();
        let q = sf.q().clone();
        let q1 = q.derivative();
        Self {
            p_uu: p_u.dx(),
            p_uv: p_u.dy(),
            p_v: p.dy(),
            p_u,
            p,
            q2: q1.derivative(),
            q1,
            q,
        }
    }

    fn jet(&self, y: T, rho: T, theta: T) -> Jet<T> {
        let two = T::two();
        let i = Complex::new(T::zero(), T::one());
        let u = Complex::new(T::zero(), y);
        let e = Complex::new(theta.cos(), theta.sin());
        let v = Complex::new(-T::one(), T::zero()) + e * rho;

        // a(y) = q(iy) and its y-derivatives.
        let a = self.q.eval_complex(u);
        let a1 = i * self.q1.eval_complex(u);
        let a2 = -self.q2.eval_complex(u);
        let q_abs = a.norm_sqr();
        let q_y = two * (a.conj() * a1).re;
        let q_yy = two * (a1.norm_sqr() + (a.conj() * a2).re);

        // h(y, rho, theta) = p(iy, -1 + rho e^{i theta}).
        let h = self.p.eval_complex(u, v);
        let pu = self.p_u.eval_complex(u, v);
        let pv = self.p_v.eval_complex(u, v);
        let puu = self.p_uu.eval_complex(u, v);
        let puv = self.p_uv.eval_complex(u, v);
        let h_y = i * pu;
        let h_rho = pv * e;
        let h_theta = pv * i * e * rho;
        let h_yy = -puu;
        let h_yrho = i * puv * e;
        let h_ytheta = -(puv * e * rho);

        let hc = h.conj();
        Jet {
            f: q_abs - h.norm_sqr(),
            g: q_y - two * (hc * h_y).re,
            f_y: q_y - two * (hc * h_y).re,
            f_rho: -two * (hc * h_rho).re,
            f_theta: -two * (hc * h_theta).re,
            g_y: q_yy - two * (h_y.norm_sqr() + (hc * h_yy).re),
            g_rho: -two * (h_rho.conj() * h_y + hc * h_yrho).re,
            g_theta: -two * (h_theta.conj() * h_y + hc * h_ytheta).re,
        }
    }
}

/// Unknowns of the tracked system: `(y, rho)`, or `rho` alone when `F`
/// has no `y` dependence.
#[derive(Debug, Clone, Copy)]
struct State<T> {
    y: T,
    rho: T,
}

struct Tracker<'a, T> {
    sf: &'a StabilityFunction<T>,
    d: Derivs<T>,
    radial: bool,
    rho_max: T,
}

impl<'a, T: Real> Tracker<'a, T> {
    /// `d(y, rho)/d theta` along the branch.
    fn tangent(&self, s: State<T>, theta: T) -> Option<State<T>> {
        let j = self.d.jet(s.y, s.rho, theta);
        if self.radial {
            let drho = -j.f_theta / j.f_rho;
            return drho.is_finite().then_some(State { y: T::zero(), rho: drho });
        }
        let det = j.f_y * j.g_rho - j.f_rho * j.g_y;
        if det.is_zero() || !det.is_finite() {
            return None;
        }
        let dy = -(j.f_theta * j.g_rho - j.f_rho * j.g_theta) / det;
        let drho = -(j.f_y * j.g_theta - j.f_theta * j.g_y) / det;
        (dy.is_finite() && drho.is_finite()).then_some(State { y: dy, rho: drho })
    }

    fn correct(&self, mut s: State<T>, theta: T) -> Option<State<T>> {
        let tol = T::tol(NEWTON_REL);
        for _ in 0..NEWTON_ITERS {
            let j = self.d.jet(s.y, s.rho, theta);
            let (dy, drho) = if self.radial {
                (T::zero(), j.f / j.f_rho)
            } else {
                let det = j.f_y * j.g_rho - j.f_rho * j.g_y;
                if det.is_zero() {
                    return None;
                }
                ((j.f * j.g_rho - j.f_rho * j.g) / det, (j.f_y * j.g - j.f * j.g_y) / det)
            };
            s.y -= dy;
            s.rho -= drho;
            if !(s.y.is_finite() && s.rho.is_finite()) {
                return None;
            }
            if dy.abs() <= tol * (T::one() + s.y.abs()) && drho.abs() <= tol * (T::one() + s.rho) {
                return (s.rho > T::zero() && s.rho <= self.rho_max).then_some(s);
            }
        }
        None
    }

    fn seed(&self, theta: T) -> Result<Option<State<T>>, BoundaryError> {
        let root = build_ray_system(self.sf, theta).and_then(|rs| smallest_valid_root(&rs, self.rho_max));
        match root {
            Ok(r) => Ok(Some(State {
                y: r.y_witness,
                rho: r.rho,
            })),
            Err(RayError::NoRootOnRay { .. }) | Err(RayError::ResultantVanishes) | Err(RayError::Eigen(_)) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

/// Boundary by continuation from the smallest root at `theta = 0`.
///
/// The step is shrunk so that a whole number `n` of steps spans `2 pi`,
/// which puts the samples on the same grid as the per-ray methods with
/// `n` samples. A step whose corrector fails is recorded as failed and the
/// next angle is re-seeded from a fresh root solve.
pub fn trace_continuation_method<T: Real>(
    sf: &StabilityFunction<T>,
    theta_step: T,
    rho_max: T,
) -> Result<BoundaryCurve<T>, BoundaryError> {
    if !(theta_step > T::zero() && theta_step.is_finite()) {
        return Err(BoundaryError::InvalidStep);
    }
    if !(rho_max > T::zero() && rho_max.is_finite()) {
        return Err(BoundaryError::InvalidRhoMax);
    }
    let ratio = (T::tau() / theta_step).to_f64().unwrap_or(f64::INFINITY);
    if !ratio.is_finite() || ratio > 1e8 {
        return Err(BoundaryError::InvalidStep);
    }
    let n = (ratio * (1.0 - 1e-12)).ceil() as usize;
    if n < MIN_SAMPLES {
        return Err(BoundaryError::TooFewSamples(n));
    }

    let tracker = Tracker {
        sf,
        d: Derivs::new(sf),
        radial: sf.p().deg_x() == 0 && sf.q().degree().unwrap_or(0) == 0,
        rho_max,
    };
    let thetas = super::theta_grid::<T>(n);
    let first = tracker.seed(thetas[0]).map_err(|e| match e {
        BoundaryError::Ray(r) => BoundaryError::Seed(r),
        other => other,
    })?;
    let Some(first) = first else {
        let theta = thetas[0];
        let rs = build_ray_system(sf, theta).map_err(BoundaryError::Seed)?;
        let err = smallest_valid_root(&rs, rho_max).err().unwrap_or(RayError::NoRootOnRay {
            theta: 0.0,
            rho_max: rho_max.to_f64().unwrap_or(f64::NAN),
        });
        return Err(BoundaryError::Seed(err));
    };

    let mut points = Vec::with_capacity(n);
    points.push(BoundaryPoint::ok(thetas[0], first.rho));
    let mut state = Some(first);
    for k in 1..n {
        let (prev_theta, theta) = (thetas[k - 1], thetas[k]);
        let next = match state {
            Some(s) => tracker.tangent(s, prev_theta).and_then(|t| {
                let h = theta - prev_theta;
                let guess = State {
                    y: s.y + t.y * h,
                    rho: s.rho + t.rho * h,
                };
                tracker.correct(guess, theta)
            }),
            None => tracker.seed(theta)?,
        };
        points.push(match next {
            Some(s) => BoundaryPoint::ok(theta, s.rho),
            None => BoundaryPoint::failed(theta),
        });
        state = next;
    }
    Ok(BoundaryCurve {
        method: Method::Continuation,
        points,
    })
}
