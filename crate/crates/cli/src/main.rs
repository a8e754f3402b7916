//! Command-line surface: polynomial parsing, configuration, dispatch, and
//! JSON/CSV reporting for the period/determinant pipeline.
//!
//! Exit codes are a stable contract for CI: 0 pass, 1 verification fail,
//! 2 input error, 3 numerical failure.

mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use abelint::cover::XPath;
use abelint::cycles::{deform_basis, fermat_basis, fermat_poly, transport_basis_t};
use abelint::periods::{det_samples_csv, period_matrix, verify, QuadratureConfig, VerifyConfig};
use abelint::polyring::critical_data;
use abelint::specialfn::identity_suite;
use abelint::{c64, Complex64};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "abelint",
    version,
    about = "Period matrices of plane-curve levels: numeric Abelian integrals vs the closed-form determinant constant",
    after_help = "Polynomial grammar: sums of terms like 2.5*x^3, -0.3x, (0.2+0.1i)*y^2; \
                  complex literals a+bi, i, -i; parentheses and ^ powers; \
                  or a JSON array of {\"i\",\"j\",\"re\",\"im\"} terms.\n\
                  Exit codes: 0 pass, 1 verification fail, 2 input error, 3 numerical failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: ConfigFlags,
}

#[derive(Args, Clone)]
struct ConfigFlags {
    /// Relative quadrature error target (profile default 1e-10).
    #[arg(long, global = true)]
    tol_quad: Option<f64>,
    /// Branch-tracking backward-error target (profile default 1e-12).
    #[arg(long, global = true)]
    tol_track: Option<f64>,
    /// Relative fit-residual bound for polynomiality (default 1e-6).
    #[arg(long, global = true)]
    tol_fit: Option<f64>,
    /// Fitted-root vs critical-value distance bound (default 1e-5).
    #[arg(long, global = true)]
    tol_root_match: Option<f64>,
    /// Relative bound on the leading/C(H) distance from ±1 (default 1e-4).
    #[arg(long, global = true)]
    tol_sign: Option<f64>,
    /// Branch-point detour radius of the base cycles (default 1e-2).
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Number of determinant t-samples (0 = 2(n²+1)).
    #[arg(long, global = true, default_value_t = 0)]
    samples: usize,
    /// Initial homotopy step count (doubled automatically on failure).
    #[arg(long, global = true, default_value_t = 32)]
    steps: usize,
    /// Rejection distance between t-samples and critical values.
    #[arg(long, global = true, default_value_t = 0.05)]
    crit_guard: f64,
    /// t-circle center (real part).
    #[arg(long, global = true, default_value_t = 1.0)]
    t_center_re: f64,
    /// t-circle center (imaginary part).
    #[arg(long, global = true, default_value_t = 0.0)]
    t_center_im: f64,
    /// t-circle radius for determinant sampling.
    #[arg(long, global = true, default_value_t = 0.2)]
    t_radius: f64,
    /// Seed for randomized root-finder starts.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// 0 = default thread pool, 1 = sequential, N = N threads.
    #[arg(long, global = true, default_value_t = 0)]
    parallelism: usize,
    /// Write the JSON report to a file as well as stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for tables (reports are always JSON).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisChoice {
    /// Fermat basis when the input is exactly Fermat, deformed otherwise.
    Auto,
    /// Require the explicit Fermat basis (input must be x^(n+1)+y^(n+1)).
    Fermat,
    /// Always run the coefficient deformation from the Fermat basis.
    Deform,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form side: Σ(H), det E_(n,k), c_n, and C(H).
    ClosedForm {
        #[arg(long)]
        poly: String,
    },
    /// Critical points and critical values of the polynomial.
    Critical {
        #[arg(long)]
        poly: String,
    },
    /// Period matrix and determinant at a level value.
    Periods {
        #[arg(long)]
        poly: String,
        /// Level value t (complex literal, e.g. "1.2" or "1+0.3i").
        #[arg(long, default_value = "1")]
        t: String,
        #[arg(long, value_enum, default_value_t = BasisChoice::Auto)]
        basis: BasisChoice,
        /// Write the (transported) cycle basis as JSON for reproducible
        /// re-runs.
        #[arg(long)]
        basis_out: Option<PathBuf>,
    },
    /// Full verification: sample the determinant in t, fit, and compare
    /// roots and leading coefficient against the closed form.
    Verify {
        #[arg(long)]
        poly: String,
        /// Also dump the (t, det) samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the two-route identity suite up to a given n.
    Identities {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.config.parallelism > 1 {
        // set before rayon builds its global pool
        std::env::set_var("RAYON_NUM_THREADS", cli.config.parallelism.to_string());
    }
    match run(&cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

struct Failure {
    exit: u8,
    message: String,
}

impl From<abelint::Error> for Failure {
    fn from(e: abelint::Error) -> Failure {
        use abelint::Error::*;
        let exit = match e {
            InvalidParameter(_) | InvalidInput(_) | UnsupportedChart(_) | NonGeneric(_)
            | DegenerateInput(_) | NoRoots | RangeError(_) => 2,
            SolverFailure(_) | Pole(_) | ProximityError { .. } | TrackingFailure(_)
            | AccuracyFailure { .. } | HomotopyFailure { .. } | InvalidHomotopy(_) => 3,
        };
        Failure {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<parse::ParseError> for Failure {
    fn from(e: parse::ParseError) -> Failure {
        Failure {
            exit: 2,
            message: e.to_string(),
        }
    }
}

/// Tolerance profile from `ABELINT_TOL_PROFILE` (default/strict/fast);
/// explicit flags override the profile.
fn resolve_config(flags: &ConfigFlags) -> Result<VerifyConfig, Failure> {
    let profile = std::env::var("ABELINT_TOL_PROFILE").unwrap_or_else(|_| "default".into());
    let (quad, track, fit) = match profile.as_str() {
        "default" => (1e-10, 1e-12, 1e-6),
        "strict" => (1e-11, 1e-13, 1e-7),
        "fast" => (1e-8, 1e-10, 1e-5),
        other => {
            return Err(Failure {
                exit: 2,
                message: format!(
                    "unknown ABELINT_TOL_PROFILE '{other}' (expected default, strict, or fast)"
                ),
            })
        }
    };
    let cfg = VerifyConfig {
        quad: QuadratureConfig {
            rel_tol: flags.tol_quad.unwrap_or(quad).max(1e-14),
            track_tol: flags.tol_track.unwrap_or(track).max(1e-14),
            parallel: flags.parallelism != 1,
            ..QuadratureConfig::default()
        },
        fermat_delta: flags.delta.unwrap_or(1e-2),
        t_center: c64(flags.t_center_re, flags.t_center_im),
        t_radius: flags.t_radius,
        samples: flags.samples,
        homotopy_steps: flags.steps.max(1),
        fit_tol: flags.tol_fit.unwrap_or(fit),
        root_match_tol: flags.tol_root_match.unwrap_or(1e-5),
        sign_match_tol: flags.tol_sign.unwrap_or(1e-4),
        crit_guard: flags.crit_guard,
        seed: flags.seed,
    };
    for (name, v) in [
        ("tol-quad", cfg.quad.rel_tol),
        ("tol-track", cfg.quad.track_tol),
        ("tol-fit", cfg.fit_tol),
        ("tol-root-match", cfg.root_match_tol),
        ("tol-sign", cfg.sign_match_tol),
        ("delta", cfg.fermat_delta),
        ("t-radius", cfg.t_radius),
        ("crit-guard", cfg.crit_guard),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Failure {
                exit: 2,
                message: format!("--{name} must be positive, got {v}"),
            });
        }
    }
    Ok(cfg)
}

fn emit(report: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    println!("{report}");
    if let Some(path) = out {
        std::fs::File::create(path)
            .and_then(|mut f| writeln!(f, "{report}"))
            .map_err(|e| Failure {
                exit: 2,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let cfg = resolve_config(&cli.config)?;
    match &cli.command {
        Command::ClosedForm { poly } => {
            let spec = checked_spec(poly)?;
            let top = spec.poly.top_part()?;
            let mut det_e = Vec::new();
            for k in 1..spec.n {
                det_e.push(abelint::closedform::build_e(&top, k)?.det());
            }
            let c = abelint::closedform::c_of_h(&top)?;
            let report = serde_json::json!({
                "schema": "abelint/closed-form/1",
                "n": spec.n,
                "polynomial": spec.poly.to_string(),
                "sigma": cjson(top.sigma()?),
                "det_e": det_e.iter().map(|d| cjson(*d)).collect::<Vec<_>>(),
                "c_n": cjson(abelint::closedform::c_constant(spec.n)?),
                "c_of_h": cjson(c.value),
                "c_of_h_other_sign": cjson(-c.value),
                "branch_note": c.note,
            });
            emit(&serde_json::to_string_pretty(&report).unwrap(), &cli.config.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Critical { poly } => {
            let spec = checked_spec(poly)?;
            let cd = critical_data(&spec.poly, 1e-10)?;
            let points: Vec<_> = cd
                .points
                .iter()
                .zip(&cd.multiplicities)
                .zip(&cd.residuals)
                .map(|((&(x, y), &m), &r)| {
                    serde_json::json!({
                        "x": cjson(x), "y": cjson(y),
                        "multiplicity": m,
                        "value": cjson(spec.poly.eval(x, y)),
                        "gradient_norm": r,
                    })
                })
                .collect();
            let report = serde_json::json!({
                "schema": "abelint/critical/1",
                "n": spec.n,
                "polynomial": spec.poly.to_string(),
                "points": points,
                "values": cd.values.iter().map(|v| cjson(*v)).collect::<Vec<_>>(),
            });
            emit(&serde_json::to_string_pretty(&report).unwrap(), &cli.config.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Periods { poly, t, basis, basis_out } => {
            let spec = checked_spec(poly)?;
            let t = parse::parse_constant(t)?;
            let n = spec.n;
            let fermat = fermat_poly(n);
            let is_fermat = spec.poly == fermat;
            let base = fermat_basis(n, cfg.fermat_delta)?;
            let basis_at_1 = match basis {
                BasisChoice::Fermat if !is_fermat => {
                    return Err(Failure {
                        exit: 2,
                        message: "--basis fermat requires the input x^(n+1) + y^(n+1)".into(),
                    })
                }
                BasisChoice::Fermat => base,
                BasisChoice::Auto if is_fermat => base,
                BasisChoice::Auto | BasisChoice::Deform => {
                    deform_basis(&base, &fermat, &spec.poly, Complex64::ONE, cfg.homotopy_steps)?
                }
            };
            let basis_at_t = if (t - basis_at_1.t).norm() > 1e-12 {
                let hop = XPath::segment(basis_at_1.t, t);
                transport_basis_t(&basis_at_1, &spec.poly, &hop, cfg.homotopy_steps)?
            } else {
                basis_at_1
            };
            if let Some(path) = basis_out {
                std::fs::write(path, basis_at_t.to_json_string()?).map_err(|e| Failure {
                    exit: 2,
                    message: format!("cannot write {}: {e}", path.display()),
                })?;
            }
            let pm = period_matrix(&spec.poly, t, &basis_at_t, cfg.quad)?;
            let entries: Vec<Vec<_>> = (0..pm.entries.nrows())
                .map(|j| {
                    (0..pm.entries.ncols())
                        .map(|r| cjson(pm.entries[(j, r)]))
                        .collect()
                })
                .collect();
            let errors: Vec<Vec<f64>> = (0..pm.errors.nrows())
                .map(|j| (0..pm.errors.ncols()).map(|r| pm.errors[(j, r)]).collect())
                .collect();
            let report = serde_json::json!({
                "schema": "abelint/periods/1",
                "n": n,
                "polynomial": spec.poly.to_string(),
                "t": cjson(t),
                "basis_provenance": basis_at_t.provenance,
                "entries": entries,
                "error_estimates": errors,
                "det": cjson(pm.det()),
                "condition": pm.condition,
                "accuracy_ok": pm.accuracy_ok,
            });
            emit(&serde_json::to_string_pretty(&report).unwrap(), &cli.config.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { poly, csv } => {
            let spec = checked_spec(poly)?;
            let report = verify(&spec.poly, cfg)?;
            if let Some(path) = csv {
                std::fs::write(path, det_samples_csv(&report.det_samples)).map_err(|e| {
                    Failure {
                        exit: 2,
                        message: format!("cannot write {}: {e}", path.display()),
                    }
                })?;
            }
            emit(&serde_json::to_string_pretty(&report).unwrap(), &cli.config.out)?;
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Identities { n } => {
            let rows = identity_suite(*n)?;
            let all_pass = rows.iter().all(|r| r.pass);
            if cli.config.format == Format::Text {
                println!(
                    "{:<34} {:>3} {:>12} {:>10} {:>6}",
                    "identity", "n", "residual", "threshold", "pass"
                );
                for r in &rows {
                    println!(
                        "{:<34} {:>3} {:>12.3e} {:>10.1e} {:>6}",
                        r.identity, r.n, r.residual, r.threshold, r.pass
                    );
                }
            } else {
                let report = serde_json::json!({
                    "schema": "abelint/identities/1",
                    "n_max": n,
                    "rows": rows,
                    "all_pass": all_pass,
                });
                emit(&serde_json::to_string_pretty(&report).unwrap(), &cli.config.out)?;
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// Parse and run the chart/genericity gate shared by every subcommand.
fn checked_spec(poly: &str) -> Result<parse::PolySpec, Failure> {
    let spec = parse::parse_poly(poly)?;
    if !spec.chart_h0_ok {
        return Err(Failure {
            exit: 2,
            message: "chart check failed: h_0 = 0 (no x^(n+1) term); \
                      apply a linear change of variables first"
                .into(),
        });
    }
    if !spec.chart_hn1_ok {
        return Err(Failure {
            exit: 2,
            message: "chart check failed: h_(n+1) = 0 (no y^(n+1) term); \
                      apply a linear change of variables first"
                .into(),
        });
    }
    if !spec.generic {
        return Err(Failure {
            exit: 2,
            message: format!(
                "genericity check failed: Σ(H) = {} vanishes within tolerance",
                spec.sigma.map(|s| s.to_string()).unwrap_or_default()
            ),
        });
    }
    Ok(spec)
}

/// Complex values in reports are `[re, im]` pairs, matching the serde
/// form of the library's own report types.
fn cjson(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}
