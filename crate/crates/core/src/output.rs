//! CSV and SVG writers for boundary curves.

use std::fmt::Write as _;

use crate::boundary::{BoundaryCurve, BoundaryPoint, Method, PointStatus};

pub const CSV_HEADER: &str = "method,theta,rho,re_z2,im_z2,status";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CsvError {
    #[error("missing or wrong header, expected `{CSV_HEADER}`")]
    Header,
    #[error("line {line}: {msg}")]
    Row { line: usize, msg: String },
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// One row per point, LF line endings, all numbers in `{:.16e}`.
pub fn write_csv(curves: &[BoundaryCurve<f64>]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in curves {
        for p in &c.points {
            let z = p.z2();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                c.method,
                num(p.theta),
                num(p.rho),
                num(z.re),
                num(z.im),
                p.status
            );
        }
    }
    out
}

/// Inverse of [`write_csv`]; curves come back grouped by method in order of
/// first appearance.
pub fn parse_csv(text: &str) -> Result<Vec<BoundaryCurve<f64>>, CsvError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(CsvError::Header);
    }
    let mut curves: Vec<BoundaryCurve<f64>> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| CsvError::Row { line: line_no, msg };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let method: Method = fields[0].parse().map_err(err)?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| err(format!("`{s}`: {e}")));
        let theta = parse(fields[1])?;
        let rho = parse(fields[2])?;
        let status: PointStatus = fields[5].trim().parse().map_err(err)?;
        let point = BoundaryPoint { theta, rho, status };
        match curves.iter_mut().find(|c| c.method == method) {
            Some(c) => c.points.push(point),
            None => curves.push(BoundaryCurve {
                method,
                points: vec![point],
            }),
        }
    }
    Ok(curves)
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

fn color(m: Method) -> &'static str {
    match m {
        Method::Root => "#1f77b4",
        Method::Definition => "#d62728",
        Method::Continuation => "#2ca02c",
    }
}

/// One closed polyline per curve in the `z2` plane, plus a marker at `-1`.
/// Failed rays are skipped.
pub fn write_svg(curves: &[BoundaryCurve<f64>]) -> String {
    let mut xs = vec![-1.0];
    let mut ys = vec![0.0];
    for c in curves {
        for p in c.points.iter().filter(|p| p.status != PointStatus::Failed) {
            let z = p.z2();
            xs.push(z.re);
            ys.push(z.im);
        }
    }
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let cx = 0.5 * (x0 + x1);
    let cy = 0.5 * (y0 + y1);
    let map = |x: f64, y: f64| (SIZE / 2.0 + (x - cx) * scale, SIZE / 2.0 - (y - cy) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for c in curves {
        let pts: Vec<String> = c
            .points
            .iter()
            .filter(|p| p.status != PointStatus::Failed)
            .map(|p| {
                let z = p.z2();
                let (u, v) = map(z.re, z.im);
                format!("{u:.3},{v:.3}")
            })
            .collect();
        if pts.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            r#"<polygon class="{}" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            c.method,
            pts.join(" "),
            color(c.method)
        );
    }
    let (u, v) = map(-1.0, 0.0);
    let _ = writeln!(out, r#"<circle class="center" cx="{u:.3}" cy="{v:.3}" r="3" fill="black"/>"#);
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter()
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::theta_grid;

    fn curve() -> BoundaryCurve<f64> {
        let mut points: Vec<_> = theta_grid::<f64>(5)
            .into_iter()
            .map(|theta| BoundaryPoint {
                theta,
                rho: 1.0 + theta / 7.0,
                status: PointStatus::Ok,
            })
            .collect();
        points[2].status = PointStatus::Failed;
        points[2].rho = f64::NAN;
        points[3].status = PointStatus::Fallback;
        BoundaryCurve {
            method: Method::Definition,
            points,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let c = curve();
        let text = write_csv(std::slice::from_ref(&c));
        assert!(text.starts_with(CSV_HEADER));
        assert!(!text.contains('\r'));
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.len(), 1);
        for (a, b) in back[0].points.iter().zip(&c.points) {
            assert_eq!(a.theta.to_bits(), b.theta.to_bits());
            assert_eq!(a.status, b.status);
            assert!(a.rho.to_bits() == b.rho.to_bits() || (a.rho.is_nan() && b.rho.is_nan()));
        }
    }

    #[test]
    fn csv_rejects_garbage() {
        assert_eq!(parse_csv("a,b\n"), Err(CsvError::Header));
        let bad = format!("{CSV_HEADER}\nroot,1,2,3\n");
        assert!(matches!(parse_csv(&bad), Err(CsvError::Row { line: 2, .. })));
    }

    #[test]
    fn svg_has_one_polygon_per_curve() {
        let mut other = curve();
        other.method = Method::Root;
        let svg = write_svg(&[curve(), other]);
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert!(svg.contains(r#"viewBox="0 0 800 800""#));
        assert!(svg.contains("class=\"center\""));
        assert!(!svg.contains("NaN"));
    }
}
