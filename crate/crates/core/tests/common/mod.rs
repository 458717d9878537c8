#![allow(dead_code)]

use std::path::PathBuf;

use imex_stab::stabfn::stability_polynomials;
use imex_stab::tableau::parse_tableau;
use imex_stab::{Complex64, StabilityFunction, Tableau};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load(name: &str) -> Tableau {
    let text = std::fs::read_to_string(fixtures_dir().join(name)).unwrap();
    parse_tableau(&text).unwrap()
}

pub fn sf(name: &str) -> StabilityFunction {
    stability_polynomials(&load(name)).unwrap()
}

/// Every shipped fixture that parses, sorted by file name.
pub fn valid_fixtures() -> Vec<(String, Tableau)> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
        .into_iter()
        .filter_map(|n| {
            let text = std::fs::read_to_string(fixtures_dir().join(&n)).unwrap();
            parse_tableau(&text).ok().map(|t| (n, t))
        })
        .collect()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn cdet(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let piv = (k..n).max_by(|&a, &b| m[a][k].norm().total_cmp(&m[b][k].norm())).unwrap();
        if m[piv][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    det
}

/// `det(I - z1 A - z2 B + z1 e w^T + z2 e omega^T)` straight from the tableau.
pub fn p_oracle(t: &Tableau, z1: Complex64, z2: Complex64) -> Complex64 {
    let s = t.stages();
    let m = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| {
                    let id = if i == j { 1.0 } else { 0.0 };
                    id - z1 * t.a(i, j) - z2 * t.b(i, j) + z1 * t.w()[j] + z2 * t.omega()[j]
                })
                .collect()
        })
        .collect();
    cdet(m)
}

/// `det(I - z1 A)`.
pub fn q_oracle(t: &Tableau, z1: Complex64) -> Complex64 {
    let s = t.stages();
    let m = (0..s)
        .map(|i| (0..s).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0) - z1 * t.a(i, j)).collect())
        .collect();
    cdet(m)
}

pub fn z2_of(theta: f64, rho: f64) -> Complex64 {
    Complex64::new(-1.0 + rho * theta.cos(), rho * theta.sin())
}

/// Root of a continuous `f` with a sign change on `[a, b]`, to rounding level.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) < 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) < 0.0) == (fa < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
