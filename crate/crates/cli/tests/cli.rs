use std::path::PathBuf;
use std::process::{Command, Output};

use imex_stab::boundary::{Method, PointStatus};
use imex_stab::output::parse_csv;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imex-stab")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_euler_is_clean() {
    let o = run(&["check", "--tableau", &fixture("euler.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim().is_empty(), "{}", stdout(&o));
}

#[test]
fn check_rejects_diagonal_b() {
    let o = run(&["check", "--tableau", &fixture("b_diagonal.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("B not strictly lower triangular"), "{}", stderr(&o));
}

#[test]
fn check_missing_file() {
    let o = run(&["check", "--tableau", "/nonexistent/pair.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cannot read"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["boundary", "--tableau", &fixture("euler.json")])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

fn numbers(line: &str) -> Vec<f64> {
    let inner = line.split('[').nth(1).unwrap().trim_end_matches(']');
    inner.split(',').map(|s| s.trim().parse().unwrap()).collect()
}

#[test]
fn stabfn_euler() {
    let o = run(&["stabfn", "--tableau", &fixture("euler.json")]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(numbers(lines[1]), vec![1.0, 1.0]);
    assert_eq!(numbers(lines[2]), vec![0.0, 0.0]);
    assert_eq!(numbers(lines[3]), vec![1.0, -1.0]);
    // 17 significant digits
    assert!(lines[1].contains("1.0000000000000000e0"));
}

#[test]
fn stabfn_fully_explicit_one_stage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fe.json");
    std::fs::write(&path, r#"{"s":1,"A":[[0]],"w":[1],"B":[[0]],"omega":[1]}"#).unwrap();
    let o = run(&["stabfn", "--tableau", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    // p = 1 + z1 + z2, q = 1
    assert_eq!(numbers(lines[1]), vec![1.0, 1.0]);
    assert_eq!(numbers(lines[2]), vec![1.0, 0.0]);
    assert_eq!(numbers(lines[3]), vec![1.0]);
}

#[test]
fn stabfn_invalid_tableau() {
    assert_eq!(code(&run(&["stabfn", "--tableau", &fixture("b_diagonal.json")])), 2);
}

#[test]
fn boundary_euler_eight_rays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = run(&[
        "boundary",
        "--tableau",
        &fixture("euler.json"),
        "--method",
        "root",
        "--samples",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 9);
    let curves = parse_csv(&text).unwrap();
    assert_eq!(curves[0].points.len(), 8);
    for p in &curves[0].points {
        assert!((p.rho - 1.0).abs() < 1e-10);
        assert_eq!(p.status, PointStatus::Ok);
    }
}

#[test]
fn boundary_all_methods_agree_on_euler() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let svg = dir.path().join("b.svg");
    let o = run(&[
        "boundary",
        "--tableau",
        &fixture("euler.json"),
        "--method",
        "all",
        "--samples",
        "64",
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let curves = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let methods: Vec<Method> = curves.iter().map(|c| c.method).collect();
    assert_eq!(methods, [Method::Root, Method::Definition, Method::Continuation]);
    for (r, d) in curves[0].points.iter().zip(&curves[1].points) {
        assert_eq!(r.theta, d.theta);
        assert!((r.rho - d.rho).abs() <= 1e-6 * (1.0 + d.rho));
    }
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 3);
}

#[test]
fn boundary_cap_below_region_fails_every_ray() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = run(&[
        "boundary",
        "--tableau",
        &fixture("euler.json"),
        "--samples",
        "16",
        "--rho-max",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
    let curves = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(curves[0].points.iter().all(|p| p.status == PointStatus::Failed));
}

#[test]
fn boundary_rejects_bad_config() {
    let e = fixture("euler.json");
    for extra in ["--samples=3", "--rho-max=-1", "--tol=0"] {
        let o = run(&["boundary", "--tableau", &e, "--out", "/dev/null", extra]);
        assert_eq!(code(&o), 2, "{extra:?}");
    }
}

#[test]
fn boundary_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("b{k}.csv"));
        let o = run(&[
            "boundary",
            "--tableau",
            &fixture("ssp2_222.json"),
            "--method",
            "root",
            "--samples",
            "64",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        texts.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

fn area(name: &str, samples: usize) -> (i32, String) {
    let o = run(&["area", "--tableau", &fixture(name), "--samples", &samples.to_string()]);
    (code(&o), stdout(&o).trim().to_string())
}

#[test]
fn area_euler_is_pi() {
    let (c, out) = area("euler.json", 256);
    assert_eq!(c, 0);
    assert_eq!(out, "3.14159265359");
}

#[test]
fn area_rk3_converges() {
    let (c1, a) = area("rk3_explicit.json", 512);
    let (c2, b) = area("rk3_explicit.json", 1024);
    assert_eq!((c1, c2), (0, 0));
    let (a, b): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
    assert!(a.is_finite() && a > 0.0);
    assert!((a - b).abs() < 1e-4, "{a} vs {b}");
}

#[test]
fn area_with_failed_ray_exits_three() {
    let o = run(&["area", "--tableau", &fixture("euler.json"), "--rho-max", "0.5"]);
    assert_eq!(code(&o), 3);
}
