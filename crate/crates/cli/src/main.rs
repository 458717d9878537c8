use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use imex_stab::boundary::{
    self, area, trace_continuation_method, trace_definition_method, trace_root_method, BoundaryError, Method,
};
use imex_stab::output::{write_csv, write_svg};
use imex_stab::stabfn::stability_polynomials;
use imex_stab::tableau::{parse_tableau, validate, Severity};
use imex_stab::{BoundaryCurve, StabilityFunction, Tableau};

const INVALID_INPUT: u8 = 2;
const NUMERICAL_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(name = "imex-stab", version, about = "L-stable region boundaries of IMEX Runge-Kutta pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tableau and print diagnostics.
    Check {
        #[arg(long)]
        tableau: PathBuf,
    },
    /// Print the coefficients of p(z1, z2) and q(z1).
    Stabfn {
        #[arg(long)]
        tableau: PathBuf,
    },
    /// Trace the region boundary and write it as CSV.
    Boundary {
        #[arg(long)]
        tableau: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Root)]
        method: MethodArg,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long = "rho-max", default_value_t = 20.0)]
        rho_max: f64,
        #[arg(long, default_value_t = boundary::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Area of the region from the root-method boundary.
    Area {
        #[arg(long)]
        tableau: PathBuf,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long = "rho-max", default_value_t = 20.0)]
        rho_max: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Root,
    Definition,
    Continuation,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Root => vec![Method::Root],
            MethodArg::Definition => vec![Method::Definition],
            MethodArg::Continuation => vec![Method::Continuation],
            MethodArg::All => vec![Method::Root, Method::Definition, Method::Continuation],
        }
    }
}

/// Error carrying the process exit status.
struct Fail(u8, String);

type CmdResult = Result<(), Fail>;

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(INVALID_INPUT, msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Check { tableau } => cmd_check(&tableau),
        Command::Stabfn { tableau } => cmd_stabfn(&tableau),
        Command::Boundary {
            tableau,
            method,
            samples,
            rho_max,
            tol,
            out,
            svg,
        } => cmd_boundary(&tableau, method, samples, rho_max, tol, &out, svg.as_deref()),
        Command::Area {
            tableau,
            samples,
            rho_max,
        } => cmd_area(&tableau, samples, rho_max),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn load(path: &Path) -> Result<Tableau, Fail> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_tableau(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// Loads a tableau that also passes validation without errors.
fn load_valid(path: &Path) -> Result<Tableau, Fail> {
    let t = load(path)?;
    if let Some(d) = validate(&t).into_iter().find(|d| d.severity == Severity::Error) {
        return Err(invalid(format!("{}: {}", path.display(), d.message)));
    }
    Ok(t)
}

fn stability_function(t: &Tableau) -> Result<StabilityFunction, Fail> {
    stability_polynomials(t).map_err(|e| Fail(NUMERICAL_FAILURE, e.to_string()))
}

fn cmd_check(path: &Path) -> CmdResult {
    let t = load(path)?;
    let diags = validate(&t);
    for d in &diags {
        println!("{d}");
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(invalid(format!("{} failed validation", path.display())));
    }
    Ok(())
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_stabfn(path: &Path) -> CmdResult {
    let sf = stability_function(&load_valid(path)?)?;
    let p = sf.p();
    let d = p.deg_x().max(p.deg_y());
    println!("p (rows: powers of z1, columns: powers of z2):");
    for j in 0..=d {
        let row: Vec<String> = (0..=d).map(|k| fmt17(p.coeff(j, k))).collect();
        println!("  [{}]", row.join(", "));
    }
    let q: Vec<String> = sf.q().coeffs().iter().map(|&c| fmt17(c)).collect();
    let q = if q.is_empty() { vec![fmt17(0.0)] } else { q };
    println!("q (powers of z1): [{}]", q.join(", "));
    Ok(())
}

fn check_config(samples: usize, rho_max: f64, tol: f64) -> CmdResult {
    if samples < boundary::MIN_SAMPLES {
        return Err(invalid(format!("--samples must be at least {}", boundary::MIN_SAMPLES)));
    }
    if !(rho_max > 0.0 && rho_max.is_finite()) {
        return Err(invalid("--rho-max must be positive and finite"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid("--tol must be positive and finite"));
    }
    Ok(())
}

fn trace(sf: &StabilityFunction, m: Method, samples: usize, rho_max: f64, tol: f64) -> Result<BoundaryCurve, BoundaryError> {
    match m {
        Method::Root => trace_root_method(sf, samples, rho_max),
        Method::Definition => trace_definition_method(sf, samples, rho_max, tol),
        Method::Continuation => trace_continuation_method(sf, std::f64::consts::TAU / samples as f64, rho_max),
    }
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn cmd_boundary(
    path: &Path,
    method: MethodArg,
    samples: usize,
    rho_max: f64,
    tol: f64,
    out: &Path,
    svg: Option<&Path>,
) -> CmdResult {
    check_config(samples, rho_max, tol)?;
    let sf = stability_function(&load_valid(path)?)?;

    let mut curves = Vec::new();
    let mut errors = Vec::new();
    let mut failed_rays = 0;
    for m in method.methods() {
        match trace(&sf, m, samples, rho_max, tol) {
            Ok(c) => {
                let failed = c.failed_thetas().len();
                failed_rays += failed;
                match c.rho_range() {
                    Some((lo, hi)) => println!("{m}: {} rays, rho in [{lo:.10}, {hi:.10}], {failed} failed", c.points.len()),
                    None => println!("{m}: {} rays, all failed", c.points.len()),
                }
                curves.push(c);
            }
            Err(e) => {
                println!("{m}: {e}");
                errors.push(format!("{m}: {e}"));
            }
        }
    }

    write_file(out, &write_csv(&curves))?;
    if let Some(svg) = svg {
        write_file(svg, &write_svg(&curves))?;
    }

    if !errors.is_empty() {
        return Err(Fail(NUMERICAL_FAILURE, errors.join("; ")));
    }
    if failed_rays > 0 {
        return Err(Fail(NUMERICAL_FAILURE, format!("{failed_rays} ray(s) failed")));
    }
    Ok(())
}

/// `v` rounded to `digits` significant digits in positional notation.
fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

fn cmd_area(path: &Path, samples: usize, rho_max: f64) -> CmdResult {
    check_config(samples, rho_max, boundary::DEFAULT_TOL)?;
    let sf = stability_function(&load_valid(path)?)?;
    let curve = trace_root_method(&sf, samples, rho_max).map_err(|e| Fail(NUMERICAL_FAILURE, e.to_string()))?;
    let a = area(&curve).map_err(|e| Fail(NUMERICAL_FAILURE, e.to_string()))?;
    println!("{}", significant(a, 12));
    Ok(())
}
