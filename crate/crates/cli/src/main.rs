use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hms_core::curvetop::glue_curve;
use hms_core::hmscheck::export::{descent_dot, dual_graph_dot, skeleton_dot};
use hms_core::hmscheck::{affine_report, crepant_report, global_report, HmsReport};
use hms_core::toricdata::{parse_fan, NormalFormParams, StackyFan};

#[derive(Parser)]
#[command(name = "hms", version, about = "Mirror-symmetry checks for toric Calabi-Yau 3-orbifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Export {
    Skeleton,
    Dual,
    Descent,
}

#[derive(clap::Args)]
struct Output {
    /// Weight window [-N, N] for all series.
    #[arg(long, env = "HMS_TRUNCATE", default_value_t = 30)]
    truncate: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Compare both sides on one cone in normal form.
    Affine {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run the per-cone, descent, edge, and gluing checks on a fan.
    Check {
        fan: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Compare two triangulations of the same polygon.
    Crepant {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Write a Graphviz file.
    Export {
        #[arg(long, value_enum)]
        what: Export,
        fan: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mirror curve topology only.
    Analyze {
        fan: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Bad input (exit 2) versus a failed computation (exit 1).
enum Failure {
    Input(anyhow::Error),
    Check(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn load(path: &Path) -> Result<StackyFan, Failure> {
    let doc = fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    parse_fan(&doc).map_err(|e| Failure::Input(anyhow::anyhow!("{}: {e}", path.display())))
}

fn emit(report: &HmsReport, format: Format) -> u8 {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print!("{}", report.to_json()),
    }
    report.exit_code() as u8
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Affine { r, m, s, out } => {
            let params = NormalFormParams::new(r, m, s)?;
            Ok(emit(&affine_report(params, out.truncate), out.format))
        }
        Command::Check { fan, out } => {
            let f = load(&fan)?;
            let input = json!({"command": "check", "fan": fan.display().to_string(), "truncation": out.truncate});
            Ok(emit(&global_report(&f, out.truncate, input), out.format))
        }
        Command::Crepant { first, second, out } => {
            let (a, b) = (load(&first)?, load(&second)?);
            let input = json!({
                "command": "crepant",
                "fans": [first.display().to_string(), second.display().to_string()],
                "truncation": out.truncate,
            });
            let report = crepant_report(&a, &b, out.truncate, input)?;
            Ok(emit(&report, out.format))
        }
        Command::Export { what, fan, out } => {
            let f = load(&fan)?;
            let dot = match what {
                Export::Skeleton => skeleton_dot(&f),
                Export::Dual => Ok(dual_graph_dot(&f)),
                Export::Descent => descent_dot(&f),
            }
            .map_err(|e| Failure::Check(e.into()))?;
            fs::write(&out, dot).map_err(|e| anyhow::anyhow!("{}: {e}", out.display()))?;
            Ok(0)
        }
        Command::Analyze { fan, format } => {
            let f = load(&fan)?;
            let curve = glue_curve(&f).map_err(|e| Failure::Check(e.into()))?;
            let value = json!({
                "fan": fan.display().to_string(),
                "cones": curve.cones.iter().map(|c| json!({
                    "triangle": c.triangle,
                    "params": c.normal_form.params,
                    "order": c.group.order(),
                    "punctures": c.curve.punctures,
                })).collect::<Vec<_>>(),
                "interior_edges": curve.identifications.len(),
                "topology": {"genus": curve.genus, "punctures": curve.punctures, "chi": curve.chi},
                "pick": [curve.pick.0, curve.pick.1],
            });
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializes")),
                Format::Text => {
                    for c in &curve.cones {
                        println!(
                            "cone {} {}: |G| = {}, punctures {:?}",
                            c.triangle,
                            c.normal_form.params,
                            c.group.order(),
                            c.curve.punctures
                        );
                    }
                    println!(
                        "genus {} punctures {} chi {} (interior points {}, boundary points {})",
                        curve.genus, curve.punctures, curve.chi, curve.pick.0, curve.pick.1
                    );
                }
            }
            Ok(if curve.matches_pick() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("check failed: {e:#}");
            ExitCode::from(1)
        }
    }
}
