use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use greenpot::conditions::exponents;
use greenpot::pipeline::{exit_code_for, run_scenario, RunOptions};
use greenpot::report::REPORT_SCHEMA;
use greenpot::scenario::Scenario;

#[derive(Parser)]
#[command(name = "greenpot", version, about = "Green-potential laboratory for sublinear elliptic problems with measure data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write a JSON report.
    Run {
        /// Path to the scenario JSON file.
        scenario: PathBuf,
        /// Where to write the report JSON.
        #[arg(long)]
        out: PathBuf,
        /// Directory for radial profile CSV tables (written when set).
        #[arg(long)]
        profiles: Option<PathBuf>,
        /// Tolerance override, repeatable: --tolerance name=value.
        #[arg(long = "tolerance", value_parser = parse_tolerance)]
        tolerance: Vec<(String, f64)>,
        /// Seed override for the randomized checks.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the exponent bundle for (n, p, q) as JSON.
    Exponents {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
    },
    /// Print the report JSON schema.
    Schema,
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value: f64 = value
        .parse()
        .map_err(|e| format!("tolerance '{name}': {e}"))?;
    Ok((name.to_string(), value))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            out,
            profiles,
            tolerance,
            seed,
        } => {
            let scenario = match Scenario::from_path(&scenario) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let opts = RunOptions {
                seed,
                tolerance_overrides: tolerance,
                profiles_dir: profiles,
            };
            let outcome = run_scenario(&scenario, &opts);
            let code = exit_code_for(&outcome);
            match outcome {
                Ok(report) => {
                    let json = match report.to_json() {
                        Ok(j) => j,
                        Err(e) => {
                            eprintln!("error: {e}");
                            return ExitCode::from(1);
                        }
                    };
                    if let Err(e) = std::fs::write(&out, json) {
                        eprintln!("error: cannot write {}: {e}", out.display());
                        return ExitCode::from(1);
                    }
                    if code != 0 {
                        eprintln!(
                            "scenario '{}' completed with unsatisfied checks (exit 2)",
                            report.scenario.name
                        );
                    }
                }
                Err(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(code as u8)
        }
        Command::Exponents { n, p, q } => match exponents(n, p, q) {
            Ok(e) => {
                println!("{}", serde_json::to_string_pretty(&e).expect("serializable"));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Schema => {
            println!("{REPORT_SCHEMA}");
            ExitCode::SUCCESS
        }
    }
}
