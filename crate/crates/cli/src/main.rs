//! Command-line front end for the harmonic-analysis toolkit: applies
//! integral kernels, scans complete points, runs uncertainty-principle
//! checks, measures point-set densities, evaluates perturbation bounds,
//! decomposes signals over atom dictionaries, and computes independent
//! radii. All reports are JSON with the fully resolved configuration
//! embedded; array outputs are CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qup_lab::complete_points::{self, OmegaPoint};
use qup_lab::density::{self, PointSet};
use qup_lab::error::QupError;
use qup_lab::grid::{make_grid, Grid, Signal};
use qup_lab::independence::FunctionFamily;
use qup_lab::io;
use qup_lab::kernels::{self, KernelSpec};
use qup_lab::op_family::{self, AtomGenerator, Dictionary};
use qup_lab::perturb;
use qup_lab::qup::{self, TransformTag};

#[derive(Parser)]
#[command(name = "qup-lab", version, about = "Numerical toolkit for integral-kernel completeness and uncertainty principles")]
struct Cli {
    /// Seed recorded in every report and used by randomized routines.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for report files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

/// `a:b:n` → uniform grid.
fn parse_range(s: &str) -> Result<Grid, QupError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(QupError::InvalidInput(format!(
            "range must be a:b:n, got {s:?}"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| QupError::InvalidInput(format!("bad range start {:?}", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| QupError::InvalidInput(format!("bad range end {:?}", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| QupError::InvalidInput(format!("bad range count {:?}", parts[2])))?;
    make_grid(a, b, n)
}

fn parse_list(s: &str) -> Result<Vec<f64>, QupError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| QupError::InvalidInput(format!("bad number {p:?} in list")))
        })
        .collect()
}

/// Kernel argument: the literals `fourier` / `inverse-fourier`, or a path to
/// a kernel-spec JSON file.
fn load_kernel(arg: &str) -> Result<KernelSpec, QupError> {
    match arg {
        "fourier" => Ok(KernelSpec::Fourier),
        "inverse-fourier" => Ok(KernelSpec::InverseFourier),
        path => {
            let p = Path::new(path);
            if !p.exists() {
                return Err(QupError::InvalidInput(format!(
                    "kernel spec file not found: {path}"
                )));
            }
            KernelSpec::from_json_file(p)
        }
    }
}

fn load_signal(path: &Path) -> Result<Signal, QupError> {
    if !path.exists() {
        return Err(QupError::InvalidInput(format!(
            "signal file not found: {}",
            path.display()
        )));
    }
    io::read_signal_file(path)
}

#[derive(Subcommand)]
enum Command {
    /// Apply an integral kernel to a signal over an ω-grid.
    Transform(TransformArgs),
    /// Classify kernel parameter points as complete/regular/stable.
    ScanCp(ScanCpArgs),
    /// Window-doubling qualitative-uncertainty check of a transform.
    QupCheck(QupCheckArgs),
    /// Beurling densities of a point set.
    Density(DensityArgs),
    /// Perturbation bounds (mixed criterion, optional exponential-shift test).
    Perturb(PerturbArgs),
    /// Greedy pursuit of a signal over atom dictionaries.
    Decompose(DecomposeArgs),
    /// Independent radius of a function family at a point.
    Independence(IndependenceArgs),
}

#[derive(Args)]
struct TransformArgs {
    /// `fourier`, `inverse-fourier`, or a kernel-spec JSON path.
    #[arg(long)]
    kernel: String,
    /// Signal CSV (`t,re,im`).
    #[arg(long)]
    signal: PathBuf,
    /// Output ω-grid as `a:b:n`.
    #[arg(long, allow_hyphen_values = true)]
    omega: String,
}

#[derive(Args)]
struct ScanCpArgs {
    #[arg(long)]
    kernel: String,
    /// Scan grid of ω0 values as `a:b:n`.
    #[arg(long, allow_hyphen_values = true)]
    omega: String,
    /// Decreasing neighborhood radii, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    radii: String,
    /// Analysis t-grid as `a:b:n`.
    #[arg(long, default_value = "-1:1:65", allow_hyphen_values = true)]
    tgrid: String,
}

#[derive(Args)]
struct QupCheckArgs {
    /// `fourier`, `wigner`, or `kernel` (with --kernel).
    #[arg(long)]
    transform: String,
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    signal: PathBuf,
    /// Relative ε for support measurement.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Number of doubling windows.
    #[arg(long, default_value_t = 3)]
    windows: usize,
}

#[derive(Args)]
struct DensityArgs {
    /// Point-set file: one real per line, `#` comments.
    #[arg(long)]
    points: PathBuf,
    /// Interval lengths for the sliding count, comma separated.
    #[arg(long)]
    radii: String,
}

#[derive(Args)]
struct PerturbArgs {
    /// Lower frame bound A.
    #[arg(long)]
    a: f64,
    /// Upper frame bound B.
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    d: f64,
    /// Also run the basis-equivalence test on `e^{i(n+shift)t}`.
    #[arg(long)]
    pw_shift: Option<f64>,
    /// Frequency count per side for the shift test.
    #[arg(long, default_value_t = 16)]
    pw_count: i64,
    /// Randomized trials for the shift test.
    #[arg(long, default_value_t = 30)]
    trials: usize,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    signal: PathBuf,
    /// Dictionary families, repeatable: `fourier` or `chirp`.
    #[arg(long = "dict", required = true)]
    dicts: Vec<String>,
    #[arg(long, default_value_t = 5)]
    atoms: usize,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Fourier frequency grid as `a:b:n`.
    #[arg(long, default_value = "-8:8:161", allow_hyphen_values = true)]
    fourier_range: String,
    /// Chirp rate grid as `a:b:n`.
    #[arg(long, default_value = "0:1:21")]
    chirp_range: String,
}

#[derive(Args)]
struct IndependenceArgs {
    /// Family CSV (`t,re_1,im_1,...`), or use --cosines for a built-in family.
    #[arg(long)]
    family: Option<PathBuf>,
    /// Built-in family {cos nω, n = 0..N} on the sampling grid.
    #[arg(long)]
    cosines: Option<usize>,
    /// Sampling grid as `a:b:n` (built-in family only).
    #[arg(long, default_value = "-3.14159265358979:3.14159265358979:321", allow_hyphen_values = true)]
    grid: String,
    /// Point at which the independent radius is measured.
    #[arg(long, allow_negative_numbers = true)]
    omega0: f64,
    /// Eigenvalue-ratio tolerance for numerical independence.
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
}

fn write_report(out_dir: &Path, name: &str, body: &serde_json::Value) -> Result<(), QupError> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    let text = serde_json::to_string_pretty(body)
        .map_err(|e| QupError::InvalidInput(format!("report serialization failed: {e}")))?;
    std::fs::write(&path, text.as_bytes())?;
    println!("{text}");
    Ok(())
}

fn run(cli: &Cli) -> Result<(), QupError> {
    match &cli.command {
        Command::Transform(args) => {
            let kernel = load_kernel(&args.kernel)?;
            let f = load_signal(&args.signal)?;
            let omega_grid = parse_range(&args.omega)?;
            let op = kernels::discretize(&kernel, omega_grid, f.grid)?;
            let transformed = kernels::apply(&op, &f)?;
            std::fs::create_dir_all(&cli.out)?;
            let csv_path = cli.out.join("transform.csv");
            let file = std::fs::File::create(&csv_path)?;
            io::write_signal_csv(file, &transformed)?;
            write_report(
                &cli.out,
                "transform.json",
                &json!({
                    "config": {
                        "subcommand": "transform",
                        "kernel": args.kernel,
                        "signal": args.signal.display().to_string(),
                        "omega": args.omega,
                        "seed": cli.seed,
                    },
                    "output": csv_path.display().to_string(),
                    "rows": transformed.grid.n,
                    "norm": transformed.norm(),
                }),
            )
        }
        Command::ScanCp(args) => {
            let kernel = load_kernel(&args.kernel)?;
            let omega_grid = parse_range(&args.omega)?;
            let radii = parse_list(&args.radii)?;
            let t_grid = parse_range(&args.tgrid)?;
            let mut rows = String::from(
                "omega0,verdict,regularity,stability,trivial,criterion,a_min,b_max\n",
            );
            let mut reports = Vec::new();
            for j in 0..omega_grid.n {
                let omega0 = omega_grid.node(j);
                let report =
                    complete_points::classify_point(&kernel, OmegaPoint::Real(omega0), &radii, t_grid)?;
                let (a_min, b_max) = report.evidence.iter().fold(
                    (f64::INFINITY, 0.0f64),
                    |(lo, hi), e| (lo.min(e.lower), hi.max(e.upper)),
                );
                rows.push_str(&format!(
                    "{omega0},{},{},{},{},{},{a_min},{b_max}\n",
                    json_tag(&report.verdict)?,
                    json_tag(&report.regularity)?,
                    json_tag(&report.stability)?,
                    report.trivial,
                    json_tag(&report.criterion)?,
                ));
                reports.push(report);
            }
            std::fs::create_dir_all(&cli.out)?;
            let csv_path = cli.out.join("scan.csv");
            std::fs::write(&csv_path, rows.as_bytes())?;
            write_report(
                &cli.out,
                "scan.json",
                &json!({
                    "config": {
                        "subcommand": "scan-cp",
                        "kernel": args.kernel,
                        "omega": args.omega,
                        "radii": args.radii,
                        "tgrid": args.tgrid,
                        "seed": cli.seed,
                    },
                    "csv": csv_path.display().to_string(),
                    "reports": reports,
                }),
            )
        }
        Command::QupCheck(args) => {
            let f = load_signal(&args.signal)?;
            let tag = match args.transform.as_str() {
                "fourier" => TransformTag::Fourier,
                "wigner" => TransformTag::Wigner,
                "kernel" => {
                    let spec = args.kernel.as_deref().ok_or_else(|| {
                        QupError::InvalidInput(
                            "--transform kernel requires --kernel".into(),
                        )
                    })?;
                    TransformTag::Kernel {
                        kernel: load_kernel(spec)?,
                    }
                }
                other => {
                    return Err(QupError::InvalidInput(format!(
                        "unknown transform {other:?} (expected fourier, wigner, or kernel)"
                    )))
                }
            };
            let report = qup::qup_check(&f, &tag, args.eps, args.windows)?;
            write_report(
                &cli.out,
                "qup-check.json",
                &json!({
                    "config": {
                        "subcommand": "qup-check",
                        "transform": args.transform,
                        "kernel": args.kernel,
                        "signal": args.signal.display().to_string(),
                        "eps": args.eps,
                        "windows": args.windows,
                        "seed": cli.seed,
                    },
                    "report": report,
                }),
            )
        }
        Command::Density(args) => {
            if !args.points.exists() {
                return Err(QupError::InvalidInput(format!(
                    "point-set file not found: {}",
                    args.points.display()
                )));
            }
            let points = io::read_point_set_file(&args.points)?;
            let window = points.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let set = PointSet::new(points, window.max(f64::MIN_POSITIVE))?;
            let radii = parse_list(&args.radii)?;
            let report = density::beurling_densities(&set, &radii)?;
            write_report(
                &cli.out,
                "density.json",
                &json!({
                    "config": {
                        "subcommand": "density",
                        "points": args.points.display().to_string(),
                        "radii": args.radii,
                        "seed": cli.seed,
                    },
                    "report": report,
                }),
            )
        }
        Command::Perturb(args) => {
            let (criterion, new_a, new_b) =
                perturb::christensen_bounds(args.a, args.b, args.lambda, args.d)?;
            let shift_report = match args.pw_shift {
                None => serde_json::Value::Null,
                Some(shift) => {
                    let g = make_grid(-std::f64::consts::PI, std::f64::consts::PI, 513)?;
                    let family = |delta: f64| -> Result<FunctionFamily, QupError> {
                        FunctionFamily::from_signals(
                            (-args.pw_count..=args.pw_count)
                                .map(|n| {
                                    Signal::from_fn(g, |t| {
                                        num_complex::Complex64::new(
                                            0.0,
                                            (n as f64 + delta) * t,
                                        )
                                        .exp()
                                    })
                                })
                                .collect(),
                        )
                    };
                    let v = perturb::paley_wiener_test(
                        &family(0.0)?,
                        &family(shift)?,
                        args.trials,
                        cli.seed,
                    )?;
                    serde_json::to_value(v)
                        .map_err(|e| QupError::InvalidInput(e.to_string()))?
                }
            };
            write_report(
                &cli.out,
                "perturb.json",
                &json!({
                    "config": {
                        "subcommand": "perturb",
                        "a": args.a,
                        "b": args.b,
                        "lambda": args.lambda,
                        "d": args.d,
                        "pw_shift": args.pw_shift,
                        "pw_count": args.pw_count,
                        "trials": args.trials,
                        "seed": cli.seed,
                    },
                    "criterion": criterion,
                    "new_lower": new_a,
                    "new_upper": new_b,
                    "shift_test": shift_report,
                }),
            )
        }
        Command::Decompose(args) => {
            let f = load_signal(&args.signal)?;
            let fr = parse_range(&args.fourier_range)?;
            let cr = parse_range(&args.chirp_range)?;
            let mut generators = Vec::new();
            for d in &args.dicts {
                match d.as_str() {
                    "fourier" => generators.push(AtomGenerator::fourier_range(fr.a, fr.b, fr.n)),
                    "chirp" => generators.push(AtomGenerator::chirp_range(cr.a, cr.b, cr.n)),
                    other => {
                        return Err(QupError::InvalidInput(format!(
                            "unknown dictionary {other:?} (expected fourier or chirp)"
                        )))
                    }
                }
            }
            let dict = Dictionary::new(generators)?;
            let dec = op_family::matching_pursuit(&f, &dict, args.atoms, args.tol)?;
            let mut residual_csv = String::from("iteration,residual\n");
            for (i, r) in dec.residual_norms.iter().enumerate() {
                residual_csv.push_str(&format!("{i},{r:.17e}\n"));
            }
            std::fs::create_dir_all(&cli.out)?;
            let csv_path = cli.out.join("residuals.csv");
            std::fs::write(&csv_path, residual_csv.as_bytes())?;
            let atoms: Vec<serde_json::Value> = dec
                .atoms
                .iter()
                .map(|(atom, coeff)| {
                    Ok(json!({
                        "kind": serde_json::to_value(atom.kind)
                            .map_err(|e| QupError::InvalidInput(e.to_string()))?,
                        "coefficient": { "re": coeff.re, "im": coeff.im },
                    }))
                })
                .collect::<Result<_, QupError>>()?;
            write_report(
                &cli.out,
                "decompose.json",
                &json!({
                    "config": {
                        "subcommand": "decompose",
                        "signal": args.signal.display().to_string(),
                        "dicts": args.dicts,
                        "atoms": args.atoms,
                        "tol": args.tol,
                        "fourier_range": args.fourier_range,
                        "chirp_range": args.chirp_range,
                        "seed": cli.seed,
                    },
                    "selected": atoms,
                    "residual_norms": dec.residual_norms,
                    "relative_residual": dec.relative_residual(),
                    "stop_reason": dec.stop_reason,
                    "residual_csv": csv_path.display().to_string(),
                }),
            )
        }
        Command::Independence(args) => {
            let family = match (&args.family, args.cosines) {
                (Some(path), None) => {
                    if !path.exists() {
                        return Err(QupError::InvalidInput(format!(
                            "family file not found: {}",
                            path.display()
                        )));
                    }
                    FunctionFamily::from_signals(io::read_family_file(path)?)?
                }
                (None, Some(n_max)) => {
                    let g = parse_range(&args.grid)?;
                    FunctionFamily::from_signals(
                        (0..=n_max)
                            .map(|n| Signal::from_real_fn(g, |w| (n as f64 * w).cos()))
                            .collect(),
                    )?
                }
                _ => {
                    return Err(QupError::InvalidInput(
                        "supply exactly one of --family or --cosines".into(),
                    ))
                }
            };
            let radius = complete_points::independent_radius(&family, args.omega0, args.tol)?;
            write_report(
                &cli.out,
                "independence.json",
                &json!({
                    "config": {
                        "subcommand": "independence",
                        "family": args.family.as_ref().map(|p| p.display().to_string()),
                        "cosines": args.cosines,
                        "grid": args.grid,
                        "omega0": args.omega0,
                        "tol": args.tol,
                        "seed": cli.seed,
                    },
                    "independent_radius": radius,
                }),
            )
        }
    }
}

/// Kebab-case tag of a unit-variant enum, via its serde form.
fn json_tag<T: serde::Serialize>(value: &T) -> Result<String, QupError> {
    let v = serde_json::to_value(value)
        .map_err(|e| QupError::InvalidInput(e.to_string()))?;
    match v {
        serde_json::Value::String(s) => Ok(s),
        other => Ok(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
