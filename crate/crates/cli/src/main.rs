mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jordan_orbit::verify::{self, SCHEMA};
use jordan_orbit::{dual, orbit, spectral, CatalogEntry, Error};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "jordan-orbit", version, about = "Orbit geometry on duals of real algebras")]
struct Cli {
    /// Catalog name (rn:N, herm:N[:real|complex|quaternion], spin:N, lie:so3,
    /// lie:sl2r, lie:un:N, sum:A+B) or path to a JSON algebra file.
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Dual element: diag:a,b,... | vec:x1,... | rand
    #[arg(long, global = true)]
    xi: Option<String>,
    /// Algebra element: diag:a,b,... | vec:x1,... | rand
    #[arg(long, global = true)]
    x: Option<String>,
    /// Override the algebra's axiom tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Axiom residuals of the algebra.
    Axioms,
    /// Spectral decomposition of an element.
    Spectral { element: Option<String> },
    /// Peirce decomposition for the canonical frame, or for the frame of --x.
    Peirce,
    /// Orbit class and tangent dimensions at a dual point.
    Orbit {
        #[arg(value_name = "XI")]
        point: Option<String>,
    },
    /// Orbit metric at a regular dual point.
    Metric {
        #[arg(value_name = "XI")]
        point: Option<String>,
    },
    /// Involutivity of the distribution at a dual point.
    Involutive {
        #[arg(value_name = "XI")]
        point: Option<String>,
    },
    /// Natural-gradient direction: the dual vector field of a covector.
    Natgrad {
        #[arg(value_name = "XI")]
        point: Option<String>,
        covector: Option<String>,
    },
    /// Acceptance checks, for one algebra or the whole catalog.
    Verify,
    /// Parameter sweeps emitted as tables.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Pole,
    Signature,
    Curve,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical { .. } => Failure::Numerical(e),
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::Io(_) | Error::Json(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Domain(e),
        }
    }
}

/// A rendered report plus whether its asserted checks passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(cli.out.as_deref(), &out.body) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            if let Error::Numerical {
                residual, condition, ..
            } = e
            {
                eprintln!("residual {residual:e}, condition estimate {condition:e}");
            }
            ExitCode::from(3)
        }
    }
}

/// Writes to a sibling temporary file and renames it into place.
fn emit(path: Option<&Path>, body: &str) -> std::io::Result<()> {
    match path {
        None => std::io::stdout().write_all(body.as_bytes()),
        Some(p) => {
            let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let tmp = dir.join(format!(".{name}.tmp"));
            std::fs::write(&tmp, body)?;
            std::fs::rename(&tmp, p)
        }
    }
}

fn load(cli: &Cli) -> Result<CatalogEntry, Failure> {
    let src = cli
        .algebra
        .as_deref()
        .ok_or_else(|| Failure::Usage("--algebra is required for this command".into()))?;
    let mut entry = jordan_orbit::from_source(src)?;
    if let Some(tol) = cli.tol {
        entry.spec = entry.spec.with_tolerance(tol)?;
    }
    Ok(entry)
}

fn pick<'a>(positional: &'a Option<String>, flag: &'a Option<String>, what: &str) -> Result<&'a str, Failure> {
    positional
        .as_deref()
        .or(flag.as_deref())
        .ok_or_else(|| Failure::Usage(format!("missing {what}")))
}

fn envelope(cli: &Cli, command: &str, algebra: Option<&str>, report: Value) -> Result<String, Failure> {
    let v = json!({
        "schema": SCHEMA,
        "command": command,
        "algebra": algebra,
        "seed": cli.seed,
        "report": report,
    });
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Failure::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Usage(e.to_string()))
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Usage(e.to_string()))
}

fn json_only(cli: &Cli, command: &str) -> Result<(), Failure> {
    if cli.format == Some(Format::Csv) {
        return Err(Failure::Usage(format!("{command} has no CSV output")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Axioms => {
            json_only(cli, "axioms")?;
            let e = load(cli)?;
            let rep = jordan_orbit::check_axioms(&e.spec);
            let passed = rep.satisfies(e.kind());
            let body = envelope(
                cli,
                "axioms",
                Some(&e.name),
                json!({ "kind": e.kind(), "dim": e.dim(), "satisfies_kind": passed, "axioms": to_value(&rep)? }),
            )?;
            Ok(Outcome { body, passed })
        }
        Command::Spectral { element } => {
            json_only(cli, "spectral")?;
            let e = load(cli)?;
            let x = input::parse_element(&e, pick(element, &cli.x, "element (--x)")?, cli.seed)?;
            let sd = spectral::spectral_decompose(&e, &x)?;
            let body = envelope(cli, "spectral", Some(&e.name), to_value(&sd)?)?;
            Ok(Outcome { body, passed: true })
        }
        Command::Peirce => {
            json_only(cli, "peirce")?;
            let e = load(cli)?;
            let frame = match &cli.x {
                Some(s) => {
                    let x = input::parse_element(&e, s, cli.seed)?;
                    spectral::spectral_decompose(&e, &x)?.frame.idempotents
                }
                None => e.canonical_frame.clone(),
            };
            let variant = spectral::default_variant(&e);
            let p = spectral::peirce_decompose(&e, &frame, variant)?;
            let c = spectral::check_peirce(&e, &p)?;
            let tol = verify::PEIRCE_TOL;
            let passed = c.dims_sum == c.dim
                && c.diagonal_one_dimensional
                && c.product_residual <= tol
                && c.eigenvalue_residual <= tol
                && c.orthogonality_residual <= tol;
            let body = envelope(
                cli,
                "peirce",
                Some(&e.name),
                json!({ "variant": variant, "rank": frame.len(), "check": to_value(&c)? }),
            )?;
            Ok(Outcome { body, passed })
        }
        Command::Orbit { point } => {
            json_only(cli, "orbit")?;
            let e = load(cli)?;
            let xi = input::parse_dual(&e, pick(point, &cli.xi, "dual element (--xi)")?, cli.seed)?;
            let class = orbit::classify_orbit(&e, &xi)?;
            let x = spectral::sharp_map_tau(&e, &xi, class.variant)?;
            let dims = orbit::tangent_dims(&e, &x)?;
            let regular = orbit::is_regular_point(&e, &xi)?;
            let passed = dims.consistent;
            let body = envelope(
                cli,
                "orbit",
                Some(&e.name),
                json!({ "class": to_value(&class)?, "tangent_dims": to_value(&dims)?, "regular_point": to_value(&regular)? }),
            )?;
            Ok(Outcome { body, passed })
        }
        Command::Metric { point } => {
            json_only(cli, "metric")?;
            let e = load(cli)?;
            let xi = input::parse_dual(&e, pick(point, &cli.xi, "dual element (--xi)")?, cli.seed)?;
            let m = orbit::metric_at(&e, &xi)?;
            let passed = m.cross_check_residual <= verify::BURES_TOL;
            let body = envelope(cli, "metric", Some(&e.name), to_value(&m)?)?;
            Ok(Outcome { body, passed })
        }
        Command::Involutive { point } => {
            json_only(cli, "involutive")?;
            let e = load(cli)?;
            let xi = input::parse_dual(&e, pick(point, &cli.xi, "dual element (--xi)")?, cli.seed)?;
            let v = dual::involutivity_test(&e.spec, &xi)?;
            let body = envelope(cli, "involutive", Some(&e.name), to_value(&v)?)?;
            Ok(Outcome { body, passed: true })
        }
        Command::Natgrad { point, covector } => {
            json_only(cli, "natgrad")?;
            let e = load(cli)?;
            let xi = input::parse_dual(&e, pick(point, &cli.xi, "dual element (--xi)")?, cli.seed)?;
            let df = input::parse_covector(&e, pick(covector, &None, "covector")?, cli.seed.wrapping_add(1))?;
            let dir = dual::dual_vector_field(&e.spec, &xi, &df)?;
            let body = envelope(
                cli,
                "natgrad",
                Some(&e.name),
                json!({ "point": to_value(&xi)?, "covector": df.as_slice(), "direction": to_value(&dir)? }),
            )?;
            Ok(Outcome { body, passed: true })
        }
        Command::Verify => {
            let rep = match &cli.algebra {
                Some(_) => verify::run_for_algebra(&load(cli)?, cli.seed)?,
                None => verify::run_suite(cli.seed)?,
            };
            for c in &rep.criteria {
                eprintln!("{}", c.line());
            }
            let body = if cli.format == Some(Format::Csv) {
                csv_table(
                    &["id", "name", "anchor", "passed", "measured", "tolerance", "details"],
                    rep.criteria
                        .iter()
                        .map(|c| {
                            vec![
                                c.id.to_string(),
                                c.name.to_string(),
                                c.anchor.to_string(),
                                c.passed.to_string(),
                                format!("{:e}", c.measured),
                                format!("{:e}", c.tolerance),
                                c.details.clone(),
                            ]
                        })
                        .collect(),
                )?
            } else {
                let mut s = serde_json::to_string_pretty(&rep).map_err(|e| Failure::Usage(e.to_string()))?;
                s.push('\n');
                s
            };
            Ok(Outcome {
                body,
                passed: rep.passed,
            })
        }
        Command::Sweep { kind } => sweep(cli, *kind),
    }
}

fn sweep(cli: &Cli, kind: SweepKind) -> Result<Outcome, Failure> {
    let e = load(cli)?;
    let csv = cli.format != Some(Format::Json);
    match kind {
        SweepKind::Pole => {
            let s = orbit::pole_sweep(&e, &orbit::DEFAULT_POLE_EPS)?;
            let passed = s.spread <= verify::POLE_SPREAD_TOL;
            let body = if csv {
                csv_table(
                    &["eps", "max_entry", "scaled"],
                    s.rows
                        .iter()
                        .map(|r| vec![format!("{:e}", r.eps), format!("{:e}", r.max_entry), format!("{:e}", r.scaled)])
                        .collect(),
                )?
            } else {
                envelope(cli, "sweep pole", Some(&e.name), to_value(&s)?)?
            };
            Ok(Outcome { body, passed })
        }
        SweepKind::Signature => {
            let xi = input::parse_dual(&e, cli.xi.as_deref().unwrap_or("rand"), cli.seed)?;
            let trials = cli.trials.unwrap_or(verify::ORBIT_TRIALS);
            let reports = [
                orbit::signature_invariance_sweep(&e, &xi, trials, cli.seed, false)?,
                orbit::signature_invariance_sweep(&e, &xi, trials, cli.seed, true)?,
            ];
            let passed = reports.iter().all(|r| {
                r.signature_constant
                    && r.max_coefficient_drift.unwrap_or(0.0) <= verify::ORBIT_TOL
                    && r.max_pullback_residual.unwrap_or(0.0) <= verify::ORBIT_TOL
            });
            let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
            let body = if csv {
                csv_table(
                    &[
                        "automorphisms_only",
                        "trials",
                        "seed",
                        "n_plus",
                        "n_minus",
                        "signature_constant",
                        "max_coefficient_drift",
                        "max_pullback_residual",
                    ],
                    reports
                        .iter()
                        .map(|r| {
                            vec![
                                r.automorphisms_only.to_string(),
                                r.trials.to_string(),
                                r.seed.to_string(),
                                r.base_signature.0.to_string(),
                                r.base_signature.1.to_string(),
                                r.signature_constant.to_string(),
                                opt(r.max_coefficient_drift),
                                opt(r.max_pullback_residual),
                            ]
                        })
                        .collect(),
                )?
            } else {
                envelope(cli, "sweep signature", Some(&e.name), to_value(&reports)?)?
            };
            Ok(Outcome { body, passed })
        }
        SweepKind::Curve => {
            let variant = spectral::default_variant(&e);
            let mut reports = Vec::new();
            for n_plus in 1..=e.canonical_frame.len() {
                reports.push(orbit::incompleteness_curve(
                    &e,
                    &e.canonical_frame,
                    n_plus,
                    &verify::CURVE_SAMPLES,
                    variant,
                )?);
            }
            if reports.is_empty() {
                return Err(Failure::Usage(format!("{} has no canonical frame", e.name)));
            }
            let passed = reports.iter().all(|r| r.max_relative_deviation <= verify::CURVE_TOL);
            let body = if csv {
                let mut rows = Vec::new();
                for r in &reports {
                    for (t, v) in r.samples.iter().zip(&r.speeds) {
                        rows.push(vec![
                            r.n_plus.to_string(),
                            format!("{t:e}"),
                            format!("{v:e}"),
                            format!("{:e}", r.expected),
                        ]);
                    }
                }
                csv_table(&["n_plus", "t", "speed", "expected"], rows)?
            } else {
                envelope(cli, "sweep curve", Some(&e.name), to_value(&reports)?)?
            };
            Ok(Outcome { body, passed })
        }
    }
}
