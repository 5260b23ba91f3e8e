use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pretzel_lo::report::{analyze, sample_path, to_json, verify_suite, Envelope, Query};
use pretzel_lo::{
    realize_cover, realize_slope, solve_locus, Certificate, Error, PretzelKnot, SurgerySlope,
    ToleranceConfig,
};

#[derive(Parser)]
#[command(
    name = "pretzel-lo",
    version,
    about = "Elliptic representation paths of odd pretzel knots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative bracket width at which root finding stops.
    #[arg(long, global = true)]
    tol_root: Option<f64>,

    /// Acceptance bound for residual checks.
    #[arg(long, global = true)]
    tol_residual: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Limit trace, cover threshold, r1* and a verification summary.
    Analyze {
        #[arg(long)]
        knot: String,
    },
    /// Solve the trace locus at one value of r1.
    Locus {
        #[arg(long)]
        knot: String,
        #[arg(long, allow_hyphen_values = true)]
        r1: f64,
    },
    /// Certify a surgery slope m/l.
    Slope {
        #[arg(long)]
        knot: String,
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
    },
    /// Certify the n-fold cyclic branched cover.
    Cover {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        n: u32,
    },
    /// Sample the elliptic path.
    Path {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        samples: usize,
    },
    /// Run the randomized invariant suite.
    Verify {
        #[arg(long)]
        knot: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Rendered output plus whether every check behind it passed.
struct Outcome {
    text: String,
    passed: bool,
}

fn envelope<R: Serialize>(
    knot: PretzelKnot,
    query: Query,
    result: R,
    residuals: BTreeMap<String, f64>,
    cfg: ToleranceConfig,
) -> String {
    to_json(&Envelope::new(knot, query, result, residuals, cfg))
}

fn certificate_residuals(cert: &Certificate) -> BTreeMap<String, f64> {
    let mut map = BTreeMap::from([
        ("phase".to_string(), cert.phase_residual),
        ("relation".to_string(), cert.relation_residual),
        ("determinant".to_string(), cert.determinant_residual),
        ("trace".to_string(), cert.trace_residual),
    ]);
    if let Some(r) = cert.meridian_power_residual {
        map.insert("meridian_power".to_string(), r);
    }
    map
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = cli.tol_root {
        cfg.root_tol = t;
    }
    if let Some(t) = cli.tol_residual {
        cfg.residual_tol = t;
    }
    cfg.validate()?;
    if cli.format == Format::Csv && !matches!(cli.command, Command::Path { .. }) {
        return Err(Error::InvalidInput(
            "--format csv is only available for path".into(),
        ));
    }

    let outcome = match &cli.command {
        Command::Analyze { knot } => {
            let knot: PretzelKnot = knot.parse()?;
            let report = analyze(&knot, &cfg)?;
            let residuals = report.residual_summary.to_map();
            let passed = report.suite_passed;
            Outcome {
                text: envelope(knot, Query::Analyze, report, residuals, cfg),
                passed,
            }
        }
        Command::Locus { knot, r1 } => {
            let knot: PretzelKnot = knot.parse()?;
            let point = solve_locus(&knot, *r1, &cfg)?;
            let check = point.check();
            let passed = check.passed(cfg.residual_tol);
            let residuals = BTreeMap::from([
                ("equations".to_string(), check.equation_residual),
                ("lhs_identity".to_string(), check.lhs_identity_defect),
            ]);
            #[derive(Serialize)]
            struct LocusResult<P, C> {
                point: P,
                check: C,
            }
            Outcome {
                text: envelope(
                    knot,
                    Query::Locus { r1: *r1 },
                    LocusResult { point, check },
                    residuals,
                    cfg,
                ),
                passed,
            }
        }
        Command::Slope { knot, slope } => {
            let knot: PretzelKnot = knot.parse()?;
            let slope: SurgerySlope = slope.parse()?;
            let cert = realize_slope(&knot, slope, &cfg)?;
            let query = Query::Slope {
                slope: slope.to_string(),
            };
            Outcome {
                text: envelope(knot, query, cert, certificate_residuals(&cert), cfg),
                passed: cert.passed,
            }
        }
        Command::Cover { knot, n } => {
            let knot: PretzelKnot = knot.parse()?;
            let cert = realize_cover(&knot, *n, &cfg)?;
            Outcome {
                text: envelope(
                    knot,
                    Query::Cover { n: *n },
                    cert,
                    certificate_residuals(&cert),
                    cfg,
                ),
                passed: cert.passed,
            }
        }
        Command::Path { knot, samples } => {
            let knot: PretzelKnot = knot.parse()?;
            let path = sample_path(&knot, *samples, &cfg)?;
            let worst = path
                .rows
                .iter()
                .map(|row| solve_locus(&knot, row.r1, &cfg).map(|p| p.check().equation_residual))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let text = match cli.format {
                Format::Csv => path.to_csv()?,
                Format::Json => {
                    let residuals = BTreeMap::from([("equations".to_string(), worst)]);
                    envelope(
                        knot,
                        Query::Path { samples: *samples },
                        path,
                        residuals,
                        cfg,
                    )
                }
            };
            Outcome {
                text,
                passed: worst <= cfg.residual_tol,
            }
        }
        Command::Verify {
            knot,
            samples,
            seed,
        } => {
            let knot: PretzelKnot = knot.parse()?;
            let suite = verify_suite(&knot, *samples, *seed, &cfg)?;
            let residuals = suite
                .checks
                .iter()
                .map(|c| (c.name.clone(), c.worst))
                .collect();
            let passed = suite.passed;
            let query = Query::Verify {
                samples: *samples,
                seed: *seed,
            };
            Outcome {
                text: envelope(knot, query, suite, residuals, cfg),
                passed,
            }
        }
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.text),
        None => io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: verification failed");
        ExitCode::from(1)
    }
}
