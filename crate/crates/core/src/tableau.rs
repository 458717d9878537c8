//! IMEX Runge-Kutta tableau pairs: representation, JSON I/O and validation.
//!
//! A pair consists of an implicit part `(A, w)` applied to the stiff term and
//! an explicit part `(B, omega)` applied to the nonstiff term. Both share the
//! same stage count `s`. `B` must be strictly lower triangular.

use std::fmt;

use serde_json::{Map, Value};

use crate::scalar::Real;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TableauError {
    #[error("malformed tableau document: {0}")]
    Malformed(String),
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("field `{field}`: expected length {expected}, found {found}")]
    DimensionMismatch {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("field `{field}`: entry is not a finite number")]
    NonNumeric { field: String },
    #[error("B not strictly lower triangular: b_{row}{col} = {value}")]
    NotStrictlyLower { row: usize, col: usize, value: f64 },
    #[error("stage count must be positive")]
    NoStages,
}

/// An `s`-stage IMEX Runge-Kutta pair `(A, w, B, omega)`.
///
/// Matrices are stored row-major, `s * s` entries each.
#[derive(Debug, Clone, PartialEq)]
pub struct ImexTableau<T> {
    name: Option<String>,
    s: usize,
    a: Vec<T>,
    w: Vec<T>,
    b: Vec<T>,
    omega: Vec<T>,
}

impl<T: Real> ImexTableau<T> {
    /// Builds a tableau, checking shapes and finiteness only.
    ///
    /// Structural violations such as a non-strictly-lower `B` are left for
    /// [`validate`] to report, so exotic pairs can still be inspected.
    pub fn new(
        name: Option<String>,
        a: Vec<Vec<T>>,
        w: Vec<T>,
        b: Vec<Vec<T>>,
        omega: Vec<T>,
    ) -> Result<Self, TableauError> {
        let s = w.len();
        if s == 0 {
            return Err(TableauError::NoStages);
        }
        let a = flatten("A", a, s)?;
        let b = flatten("B", b, s)?;
        check_len("omega", omega.len(), s)?;
        for (field, values) in [("A", &a), ("w", &w), ("B", &b), ("omega", &omega)] {
            if values.iter().any(|v| !v.is_finite()) {
                return Err(TableauError::NonNumeric { field: field.into() });
            }
        }
        Ok(Self {
            name,
            s,
            a,
            w,
            b,
            omega,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn stages(&self) -> usize {
        self.s
    }

    /// Implicit coefficient `a_ij` (0-based).
    pub fn a(&self, i: usize, j: usize) -> T {
        self.a[i * self.s + j]
    }

    /// Explicit coefficient `b_ij` (0-based).
    pub fn b(&self, i: usize, j: usize) -> T {
        self.b[i * self.s + j]
    }

    pub fn w(&self) -> &[T] {
        &self.w
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    pub fn a_rows(&self) -> Vec<Vec<T>> {
        self.a.chunks(self.s).map(<[T]>::to_vec).collect()
    }

    pub fn b_rows(&self) -> Vec<Vec<T>> {
        self.b.chunks(self.s).map(<[T]>::to_vec).collect()
    }

    /// True when `a_ij = 0` for every `j > i`.
    pub fn a_is_lower_triangular(&self) -> bool {
        (0..self.s).all(|i| (i + 1..self.s).all(|j| self.a(i, j).is_zero()))
    }

    fn first_b_violation(&self) -> Option<(usize, usize, T)> {
        (0..self.s)
            .flat_map(|i| (i..self.s).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.b(i, j)))
            .find(|(_, _, v)| !v.is_zero())
    }
}

fn check_len(field: &str, found: usize, expected: usize) -> Result<(), TableauError> {
    if found == expected {
        Ok(())
    } else {
        Err(TableauError::DimensionMismatch {
            field: field.into(),
            expected,
            found,
        })
    }
}

fn flatten<T: Real>(field: &str, rows: Vec<Vec<T>>, s: usize) -> Result<Vec<T>, TableauError> {
    check_len(field, rows.len(), s)?;
    let mut out = Vec::with_capacity(s * s);
    for (i, row) in rows.into_iter().enumerate() {
        check_len(&format!("{field}[{i}]"), row.len(), s)?;
        out.extend(row);
    }
    Ok(out)
}

/// Parses the JSON tableau format and rejects pairs whose `B` is not strictly
/// lower triangular.
///
/// ```text
/// { "name": "...", "s": 2, "A": [[..],[..]], "w": [..], "B": [[..],[..]], "omega": [..] }
/// ```
pub fn parse_tableau(text: &str) -> Result<ImexTableau<f64>, TableauError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| TableauError::Malformed(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| TableauError::Malformed("top level must be an object".into()))?;

    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(TableauError::Malformed("`name` must be a string".into())),
    };
    let s = field(obj, "s")?
        .as_u64()
        .ok_or_else(|| TableauError::Malformed("`s` must be a non-negative integer".into()))?
        as usize;
    if s == 0 {
        return Err(TableauError::NoStages);
    }

    let a = matrix(obj, "A", s)?;
    let w = vector(field(obj, "w")?, "w", s)?;
    let b = matrix(obj, "B", s)?;
    let omega = vector(field(obj, "omega")?, "omega", s)?;

    let t = ImexTableau::new(name, a, w, b, omega)?;
    if let Some((row, col, value)) = t.first_b_violation() {
        return Err(TableauError::NotStrictlyLower {
            row: row + 1,
            col: col + 1,
            value,
        });
    }
    Ok(t)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &'static str) -> Result<&'a Value, TableauError> {
    obj.get(key).ok_or(TableauError::MissingField(key))
}

fn vector(v: &Value, name: &str, s: usize) -> Result<Vec<f64>, TableauError> {
    let arr = v
        .as_array()
        .ok_or_else(|| TableauError::Malformed(format!("`{name}` must be an array")))?;
    check_len(name, arr.len(), s)?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| TableauError::NonNumeric { field: name.into() })
        })
        .collect()
}

fn matrix(obj: &Map<String, Value>, key: &'static str, s: usize) -> Result<Vec<Vec<f64>>, TableauError> {
    let arr = field(obj, key)?
        .as_array()
        .ok_or_else(|| TableauError::Malformed(format!("`{key}` must be an array of rows")))?;
    check_len(key, arr.len(), s)?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| vector(row, &format!("{key}[{i}]"), s))
        .collect()
}

/// Serializes to the JSON format read by [`parse_tableau`].
///
/// Floats are written in shortest round-trip form, so parsing the output
/// reproduces every entry bit for bit.
pub fn serialize_tableau(t: &ImexTableau<f64>) -> String {
    let mut obj = Map::new();
    if let Some(name) = &t.name {
        obj.insert("name".into(), Value::String(name.clone()));
    }
    obj.insert("s".into(), Value::from(t.s));
    obj.insert("A".into(), serde_json::json!(t.a_rows()));
    obj.insert("w".into(), serde_json::json!(t.w));
    obj.insert("B".into(), serde_json::json!(t.b_rows()));
    obj.insert("omega".into(), serde_json::json!(t.omega));
    serde_json::to_string_pretty(&Value::Object(obj)).expect("tableau serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "WARNING",
            Severity::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.severity, self.message)
    }
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Structural and first-order checks. An empty list means every check passed.
pub fn validate<T: Real>(t: &ImexTableau<T>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let s = t.stages();

    if let Some((i, j, v)) = t.first_b_violation() {
        out.push(Diagnostic {
            severity: Severity::Error,
            message: format!("B not strictly lower triangular (b_{}{} = {v})", i + 1, j + 1),
        });
    }

    let tol = T::tol(WEIGHT_SUM_TOL);
    for (label, weights) in [("w", t.w()), ("ω", t.omega())] {
        let sum: T = weights.iter().copied().sum();
        if (sum - T::one()).abs() > tol {
            out.push(Diagnostic {
                severity: Severity::Warning,
                message: format!("Σ{label} = {sum} ≠ 1"),
            });
        }
    }

    for i in 0..s {
        let aii = t.a(i, i);
        if aii <= T::zero() {
            out.push(Diagnostic {
                severity: Severity::Warning,
                message: format!("a_{}{} = {aii} ≤ 0", i + 1, i + 1),
            });
        }
    }

    if !t.a_is_lower_triangular() {
        out.push(Diagnostic {
            severity: Severity::Warning,
            message: "A not lower triangular; p/q may differ from the one-step amplification factor".into(),
        });
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER: &str = r#"{"s":1,"A":[[1]],"w":[1],"B":[[0]],"omega":[1]}"#;

    #[test]
    fn parses_minimal_pair() {
        let t = parse_tableau(EULER).unwrap();
        assert_eq!(t.stages(), 1);
        assert_eq!(t.a(0, 0), 1.0);
        assert_eq!(t.w(), &[1.0]);
        assert_eq!(t.b(0, 0), 0.0);
        assert_eq!(t.omega(), &[1.0]);
        assert_eq!(t.name(), None);
    }

    #[test]
    fn weight_length_mismatch() {
        let err = parse_tableau(r#"{"s":1,"A":[[1]],"w":[1,0],"B":[[0]],"omega":[1]}"#).unwrap_err();
        assert_eq!(
            err,
            TableauError::DimensionMismatch {
                field: "w".into(),
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn diagonal_in_b_rejected() {
        let err = parse_tableau(
            r#"{"s":2,"A":[[1,0],[0,1]],"w":[0.5,0.5],"B":[[0.5,0],[1,0]],"omega":[0.5,0.5]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            TableauError::NotStrictlyLower {
                row: 1,
                col: 1,
                value: 0.5
            }
        );
        assert!(err.to_string().contains("B not strictly lower triangular"));
    }

    #[test]
    fn missing_and_non_numeric_fields() {
        assert_eq!(
            parse_tableau(r#"{"s":1,"A":[[1]],"B":[[0]],"omega":[1]}"#).unwrap_err(),
            TableauError::MissingField("w")
        );
        assert!(matches!(
            parse_tableau(r#"{"s":1,"A":[["x"]],"w":[1],"B":[[0]],"omega":[1]}"#).unwrap_err(),
            TableauError::NonNumeric { .. }
        ));
        assert!(matches!(parse_tableau("{not json").unwrap_err(), TableauError::Malformed(_)));
        assert!(matches!(
            parse_tableau(r#"{"s":2,"A":[[1,0]],"w":[1,0],"B":[[0,0],[1,0]],"omega":[1,0]}"#).unwrap_err(),
            TableauError::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn euler_pair_is_clean() {
        assert!(validate(&parse_tableau(EULER).unwrap()).is_empty());
    }

    #[test]
    fn weight_sum_warning() {
        let t = parse_tableau(r#"{"s":1,"A":[[1]],"w":[0.9],"B":[[0]],"omega":[1]}"#).unwrap();
        let d = validate(&t);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
        assert_eq!(d[0].message, "Σw = 0.9 ≠ 1");
    }

    #[test]
    fn non_positive_diagonal_warning() {
        let t = parse_tableau(r#"{"s":1,"A":[[0]],"w":[1],"B":[[0]],"omega":[1]}"#).unwrap();
        let d = validate(&t);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
        assert_eq!(d[0].message, "a_11 = 0 ≤ 0");
    }

    #[test]
    fn b_violation_is_an_error_for_constructed_pairs() {
        let t = ImexTableau::new(
            None,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![0.5, 0.5],
            vec![vec![0.5, 0.0], vec![1.0, 0.0]],
            vec![0.5, 0.5],
        )
        .unwrap();
        let d = validate(&t);
        assert_eq!(d[0].severity, Severity::Error);
        assert!(d[0].message.starts_with("B not strictly lower triangular"));
    }

    #[test]
    fn full_a_is_flagged() {
        let t = ImexTableau::new(
            None,
            vec![vec![1.0, 0.5], vec![0.0, 1.0]],
            vec![0.5, 0.5],
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            vec![0.5, 0.5],
        )
        .unwrap();
        let d = validate(&t);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.starts_with("A not lower triangular"));
    }

    #[test]
    fn serialize_round_trip_is_bit_exact() {
        let g = 1.0 - 1.0 / 2f64.sqrt();
        let t = ImexTableau::new(
            Some("ssp".into()),
            vec![vec![g, 0.0], vec![1.0 - 2.0 * g, g]],
            vec![0.5, 0.5],
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            vec![0.5, 0.5],
        )
        .unwrap();
        let back = parse_tableau(&serialize_tableau(&t)).unwrap();
        assert_eq!(back, t);
    }
}
