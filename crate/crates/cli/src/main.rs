use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cmnewton_cli::spec::{load_spec, resolve_instance};
use cmnewton_cli::{census, report, scan, CliError};
use cmnewton_core::ec::{deuring_agreement, ShortWeierstrassCurve};
use cmnewton_core::newton::newton_polygon;

#[derive(Parser)]
#[command(
    name = "cmnewton",
    version,
    about = "Newton polygons of reductions of CM abelian varieties, from Galois data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one instance file and print the full report.
    Run {
        /// JSON instance description.
        file: PathBuf,
        /// Emit the report as JSON.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit the slope table as CSV.
        #[arg(long)]
        csv: bool,
        /// Also write an SVG of the polygon's lattice path.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Evaluate a cyclotomic instance at every prime up to a bound.
    Scan {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Tabulate every CM type against every cyclic decomposition class.
    Census {
        file: PathBuf,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Cross-check predictions against elliptic-curve point counts.
    Oracle {
        /// Which CM curve to count points on.
        #[arg(long, value_enum)]
        curve: CurveChoice,
        /// Largest prime to check.
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveChoice {
    /// y^2 = x^3 - x, CM by the Gaussian field.
    I,
    /// y^2 = x^3 + 1, CM by the Eisenstein field.
    Zeta3,
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            file,
            json,
            csv,
            svg,
        } => {
            let spec = load_spec(&file)?;
            let instance = resolve_instance(&spec)?;
            let doc = report::build_report(&instance)?;
            if let Some(path) = svg {
                let polygon = newton_polygon(&instance.cm_type, &instance.context)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                std::fs::write(&path, report::render_svg(&polygon))?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else if csv {
                print!("{}", report::render_csv(&doc));
            } else {
                print!("{}", report::render_text(&doc));
            }
            Ok(())
        }
        Command::Scan {
            file,
            bound,
            json,
            csv,
        } => {
            let spec = load_spec(&file)?;
            let result = scan::scan_primes(&spec, bound)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&result)?);
            } else if csv {
                print!("{}", scan::render_csv(&result));
            } else {
                print!("{}", scan::render_text(&result));
            }
            Ok(())
        }
        Command::Census { file, json, csv } => {
            let spec = load_spec(&file)?;
            let result = census::census(&spec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&result)?);
            } else if csv {
                print!("{}", census::render_csv(&result));
            } else {
                print!("{}", census::render_text(&result));
            }
            Ok(())
        }
        Command::Oracle { curve, bound, json } => {
            let (curve, name) = match curve {
                CurveChoice::I => (ShortWeierstrassCurve::gaussian(), "y^2 = x^3 - x"),
                CurveChoice::Zeta3 => (ShortWeierstrassCurve::eisenstein(), "y^2 = x^3 + 1"),
            };
            let agreement = deuring_agreement(&curve, bound)
                .map_err(|e| CliError::spec("oracle", e))?;
            if json {
                let doc = serde_json::json!({
                    "curve": name,
                    "cm_conductor": curve.cm_conductor(),
                    "bound": agreement.bound,
                    "checked": agreement.checked,
                    "supersingular": agreement.supersingular,
                    "ordinary": agreement.ordinary,
                    "mismatches": agreement.mismatches.iter().map(|m| {
                        serde_json::json!({
                            "p": m.p,
                            "predicted": m.predicted.to_string(),
                            "observed": m.observed.to_string(),
                        })
                    }).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("curve: {name} (CM conductor {})", curve.cm_conductor());
                println!(
                    "good primes 5..={}: {} checked, {} supersingular, {} ordinary",
                    agreement.bound, agreement.checked, agreement.supersingular,
                    agreement.ordinary
                );
                println!("mismatches: {}", agreement.mismatches.len());
                for m in &agreement.mismatches {
                    println!(
                        "  p = {}: predicted {}, observed {}",
                        m.p, m.predicted, m.observed
                    );
                }
            }
            if agreement.mismatches.is_empty() {
                Ok(())
            } else {
                Err(CliError::Internal(format!(
                    "{} prediction/count disagreements",
                    agreement.mismatches.len()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(move || run(cli.command)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        // A panic is an engine invariant failure.
        Err(_) => ExitCode::from(2),
    }
}
