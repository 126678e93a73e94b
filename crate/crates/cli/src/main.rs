//! `modforms2`: expand catalog series, verify registry identities exactly,
//! and run the numeric batteries.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 for
//! usage, parse and lookup errors.

mod parse;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use modforms2::catalog::{self, CatalogError};
use modforms2::dsl::{self, DslError, Environment};
use modforms2::identity::{self, IdentityReport, Status};
use modforms2::numeric::checks::{self, NumericReport};
use modforms2::numeric::{default_samples, Matrix2, OdeKind, TransformLaw};
use modforms2::DEFAULT_ORDER;

/// Smallest order accepted by verification commands.
const MIN_ORDER: u32 = 8;

#[derive(Parser, Debug)]
#[command(
    name = "modforms2",
    version,
    about = "Exact and numeric checks for level-2 modular-form ODEs"
)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// Truncation order in powers of q
    #[arg(long, global = true, env = "MODFORMS2_ORDER", default_value_t = DEFAULT_ORDER)]
    order: u32,
    /// Pass threshold for numeric checks; each check has its own default
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long, short, global = true)]
    output: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coefficients of a catalog series
    Expand {
        name: String,
        /// Construction to use (see `catalog`)
        #[arg(long)]
        mode: Option<String>,
    },
    /// Check registry identities exactly
    Verify {
        ids: Vec<String>,
        #[arg(long, conflicts_with = "ids")]
        all: bool,
        /// Run one identity at a time
        #[arg(long)]
        sequential: bool,
    },
    /// Run a numeric battery
    Numeric(NumericArgs),
    /// Check a user-supplied identity
    Check {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// List catalog series and registry identities
    Catalog {
        /// List identities instead of series
        #[arg(long)]
        identities: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum NumericCheck {
    Ode,
    Transform,
    Schwarz,
    Shadow,
    Yg,
}

#[derive(Args, Debug)]
struct NumericArgs {
    #[arg(long, value_enum)]
    check: NumericCheck,
    /// ODE kind: chazy, eq18, dh, gdh, schwarzian (default: all)
    #[arg(long)]
    kind: Option<String>,
    /// Start point
    #[arg(long = "from", allow_hyphen_values = true)]
    from: Option<String>,
    /// End point
    #[arg(long, allow_hyphen_values = true)]
    to: Option<String>,
    /// Law: E2, Ecal2, y, y_transform_literal, u (default: all batteries)
    #[arg(long)]
    law: Option<String>,
    /// Matrix entries a,b,c,d (default: a seeded random batch)
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Evaluation point
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Seed for random matrices
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Comma-separated sample points in (0.05, 0.7)
    #[arg(long)]
    samples: Option<String>,
}

/// Usage, parse or lookup error; exits with status 2.
#[derive(Debug)]
struct Failure(String);

/// Report details that mean the user's point or matrix is unusable.
const INPUT_ERRORS: [&str; 3] = ["needs a matrix", "domain:", "upper half-plane"];

type Outcome = Result<(String, bool), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(msg.into())
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Text => text(),
    }
}

fn check_order(order: u32) -> Result<(), Failure> {
    if order < MIN_ORDER {
        return Err(usage(format!(
            "insufficient order: {order} (verification needs order >= {MIN_ORDER})"
        )));
    }
    Ok(())
}

fn check_tol(tol: Option<f64>) -> Result<(), Failure> {
    match tol {
        Some(t) if !(t > 0.0 && t <= 1e-2) => {
            Err(usage(format!("tol must lie in (0, 1e-2], got {t}")))
        }
        _ => Ok(()),
    }
}

fn expand(cfg: &Config, name: &str, mode: Option<&str>) -> Outcome {
    if cfg.order == 0 {
        return Err(usage("order must be positive"));
    }
    let series = catalog::build(name, cfg.order, mode).map_err(|e| match e {
        CatalogError::UnknownName(_) => {
            let names: Vec<&str> = catalog::descriptors().iter().map(|d| d.name).collect();
            usage(format!(
                "unknown series `{name}`; did you mean: {}",
                parse::suggestions(name, &names).join(", ")
            ))
        }
        other => usage(other.to_string()),
    })?;
    let coefficients: Vec<_> = series
        .body
        .terms()
        .map(|(e, c)| json!({"exponent24": e, "value": c.to_string()}))
        .collect();
    let value = json!({
        "name": name,
        "order": cfg.order,
        "lambda_degree": series.lambda_degree,
        "precision24": series.precision(),
        "coefficients": coefficients,
    });
    Ok((render(cfg.format, &value, || series.dump()), true))
}

fn report_line(r: &IdentityReport) -> String {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    };
    let mut line = format!(
        "{status:5} {:4} order {} checked to q^{} ({:.1} ms)",
        r.id,
        r.order,
        r.checked_to / 24,
        r.elapsed.as_secs_f64() * 1e3
    );
    if let Some(m) = &r.mismatch {
        line.push_str(&format!(
            "\n      first mismatch at q^({}/24): lhs {} rhs {}",
            m.exponent, m.lhs, m.rhs
        ));
    }
    if let Some(e) = &r.error {
        line.push_str(&format!("\n      {e}"));
    }
    line
}

fn verify(cfg: &Config, ids: &[String], all: bool, sequential: bool) -> Outcome {
    check_order(cfg.order)?;
    let chosen: Vec<identity::Identity> = if all || ids.is_empty() {
        identity::registry().to_vec()
    } else {
        ids.iter()
            .map(|id| identity::lookup(id).cloned())
            .collect::<Result<_, _>>()
            .map_err(|e| {
                let known: Vec<&str> = identity::registry().iter().map(|x| x.id.as_str()).collect();
                usage(format!("{e}; known ids: {}", known.join(" ")))
            })?
    };
    let env = identity::environment(cfg.order);
    let reports = identity::verify_all_in(&chosen, &env, cfg.order, !sequential);
    let ok = reports.iter().all(IdentityReport::passed);
    let records: Vec<_> = reports.iter().map(IdentityReport::record).collect();
    let text = || {
        let mut s: String = reports.iter().map(|r| report_line(r) + "\n").collect();
        let passed = reports.iter().filter(|r| r.passed()).count();
        s.push_str(&format!("{passed}/{} passed\n", reports.len()));
        s
    };
    Ok((render(cfg.format, &records, text), ok))
}

fn check(cfg: &Config, lhs: &str, rhs: &str) -> Outcome {
    check_order(cfg.order)?;
    let env = Environment::catalog(cfg.order + identity::ENV_HEADROOM);
    let report = dsl::check_identity(lhs, rhs, &env, cfg.order).map_err(|e| match e {
        DslError::Precision { .. } => usage(format!("insufficient order: {e}")),
        other => usage(other.to_string()),
    })?;
    let ok = report.passed();
    Ok((
        render(cfg.format, &report.record(), || report_line(&report) + "\n"),
        ok,
    ))
}

fn catalog_listing(cfg: &Config, identities: bool) -> Outcome {
    if identities {
        let rows: Vec<_> = identity::registry()
            .iter()
            .map(|x| {
                let meta = identity::metadata(&x.id);
                json!({
                    "id": x.id,
                    "equations": x.equations.iter().map(|e| format!("{} == {}", e.lhs, e.rhs)).collect::<Vec<_>>(),
                    "description": meta.map(|m| m.description),
                    "supplementary": meta.map(|m| m.supplementary),
                })
            })
            .collect();
        let text = || {
            identity::registry()
                .iter()
                .map(|x| {
                    let d = identity::metadata(&x.id)
                        .map(|m| m.description)
                        .unwrap_or("");
                    format!("{:4} {d}\n", x.id)
                })
                .collect()
        };
        Ok((render(cfg.format, &rows, text), true))
    } else {
        let text = || {
            catalog::descriptors()
                .iter()
                .map(|d| {
                    format!(
                        "{:7} weight {:8} {:9} [{}] {}\n",
                        d.name,
                        d.weight,
                        d.group.to_string(),
                        d.constructions.join(", "),
                        d.summary
                    )
                })
                .collect()
        };
        Ok((render(cfg.format, &catalog::descriptors(), text), true))
    }
}

fn point(src: &Option<String>, default: Complex64) -> Result<Complex64, Failure> {
    match src {
        Some(s) => parse::complex(s).map_err(usage),
        None => Ok(default),
    }
}

fn numeric_reports(cfg: &Config, a: &NumericArgs) -> Result<Vec<NumericReport>, Failure> {
    Ok(match a.check {
        NumericCheck::Ode => {
            let (z0, z1) = (
                point(&a.from, checks::BASE_POINT)?,
                point(&a.to, checks::ENDPOINT)?,
            );
            let gate = cfg.tol.unwrap_or(checks::ODE_GATE);
            let order = cfg.order.max(checks::SERIES_ORDER);
            match &a.kind {
                Some(k) => {
                    let kind: OdeKind = k
                        .parse()
                        .map_err(|e: modforms2::numeric::NumericError| usage(e.to_string()))?;
                    vec![checks::ode_check(kind, z0, z1, order, gate)]
                }
                None => OdeKind::ALL
                    .iter()
                    .map(|&k| checks::ode_check(k, z0, z1, order, gate))
                    .collect(),
            }
        }
        NumericCheck::Transform => match &a.law {
            None => {
                if a.matrix.is_some() {
                    return Err(usage("--matrix needs --law"));
                }
                checks::transform_battery(a.seed, cfg.tol)
            }
            Some(l) => {
                let law: TransformLaw = l
                    .parse()
                    .map_err(|e: modforms2::numeric::NumericError| usage(e.to_string()))?;
                let ode_law = matches!(
                    law,
                    TransformLaw::Y | TransformLaw::YLiteral | TransformLaw::U
                );
                let z = point(
                    &a.z,
                    if ode_law {
                        Complex64::new(0.0, 1.1)
                    } else {
                        checks::BASE_POINT
                    },
                )?;
                let gs: Vec<Matrix2> = match &a.matrix {
                    Some(m) => vec![parse::matrix(m).map_err(usage)?],
                    None => {
                        let n = if ode_law {
                            checks::ODE_LAW_BATCH
                        } else {
                            checks::BATCH
                        };
                        checks::random_matrices(law, z, n, a.seed)
                    }
                };
                let gate = cfg.tol.unwrap_or(if ode_law {
                    checks::ODE_LAW_GATE
                } else {
                    checks::LAW_GATE
                });
                let reports = checks::transform_check(law, &gs, z, gate);
                if let Some(d) = reports.iter().find_map(|r| {
                    r.detail
                        .as_ref()
                        .filter(|d| INPUT_ERRORS.iter().any(|e| d.contains(e)))
                }) {
                    return Err(usage(d.clone()));
                }
                reports
            }
        },
        NumericCheck::Schwarz => {
            let samples = match &a.samples {
                Some(s) => s
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|_| usage(format!("bad sample `{x}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => default_samples(),
            };
            let r = checks::schwarz_check(&samples, cfg.tol.unwrap_or(checks::SCHWARZ_GATE));
            if let Some(d) = r.detail.as_ref().filter(|d| d.starts_with("domain")) {
                return Err(usage(d.clone()));
            }
            vec![r]
        }
        NumericCheck::Shadow => {
            let z = point(&a.z, checks::BASE_POINT)?;
            let order = cfg.order.max(checks::SERIES_ORDER);
            checks::shadow_battery(z, order, cfg.tol.unwrap_or(checks::SHADOW_GATE))
        }
        NumericCheck::Yg => checks::yg_battery(cfg.tol.unwrap_or(checks::YG_GATE)),
    })
}

fn fmt_point(p: [f64; 2]) -> String {
    format!("{}{:+}i", p[0], p[1])
}

fn numeric(cfg: &Config, a: &NumericArgs) -> Outcome {
    let reports = numeric_reports(cfg, a)?;
    let ok = reports.iter().all(|r| r.pass);
    let text = || {
        let mut s = String::new();
        for r in &reports {
            s.push_str(&format!(
                "{} {} z0={}",
                if r.pass { "PASS" } else { "FAIL" },
                r.check,
                fmt_point(r.z0)
            ));
            if let Some(z1) = r.z1 {
                s.push_str(&format!(" z1={}", fmt_point(z1)));
            }
            if let Some(m) = r.matrix {
                let entries: Vec<String> = m.iter().map(|&e| fmt_point(e)).collect();
                s.push_str(&format!(" matrix=[{}]", entries.join(", ")));
            }
            s.push_str(&format!(" residual={:.3e} tol={:.1e}", r.residual, r.tol));
            if let Some(d) = &r.detail {
                s.push_str(&format!(" ({d})"));
            }
            s.push('\n');
        }
        s.push_str(&format!(
            "{}/{} passed\n",
            reports.iter().filter(|r| r.pass).count(),
            reports.len()
        ));
        s
    };
    Ok((render(cfg.format, &reports, text), ok))
}

fn run(cli: &Cli) -> Outcome {
    check_tol(cli.config.tol)?;
    let cfg = &cli.config;
    match &cli.command {
        Command::Expand { name, mode } => expand(cfg, name, mode.as_deref()),
        Command::Verify {
            ids,
            all,
            sequential,
        } => verify(cfg, ids, *all, *sequential),
        Command::Numeric(a) => numeric(cfg, a),
        Command::Check { lhs, rhs } => check(cfg, lhs, rhs),
        Command::Catalog { identities } => catalog_listing(cfg, *identities),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            let written = match &cli.config.output {
                Some(path) => fs::write(path, &out),
                None => io::stdout().write_all(out.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
