//! Thin CLI over the experiment driver. Exit codes: 0 pass, 1 numerical
//! failure, 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use reggekit::experiment::{generate_fixture, run, ExperimentConfig};
use reggekit::io::read_json;
use reggekit::Error;

#[derive(Parser)]
#[command(name = "reggekit", about = "holonomy, Regge calculus and cone-smoothing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// worker thread cap (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// single-threaded fixed-order reduction for byte-identical re-runs
        #[arg(long)]
        deterministic: bool,
    },
    /// Write a reproducible fixture file
    Fixture {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Config(_) | Error::Json(_) | Error::Io(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            jobs,
            deterministic,
        } => {
            let cfg: ExperimentConfig = match read_json(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match run(&cfg, &out, jobs, deterministic) {
                Ok(result) => {
                    for row in &result.rows {
                        println!(
                            "{} {}: value {:.6e} reference {:.6e} abs_error {:.3e} [{}]",
                            result.experiment,
                            row.label,
                            row.value,
                            row.reference,
                            row.abs_error,
                            if row.pass { "pass" } else { "FAIL" }
                        );
                    }
                    if result.passed {
                        println!("{}: pass ({:.1}s)", result.experiment, result.wall_seconds);
                        ExitCode::SUCCESS
                    } else {
                        println!("{}: FAIL ({:.1}s)", result.experiment, result.wall_seconds);
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            }
        }
        Command::Fixture { kind, seed, out } => match generate_fixture(&kind, seed, &out) {
            Ok(paths) => {
                for p in paths {
                    println!("{}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code_for(&e)
            }
        },
    }
}
