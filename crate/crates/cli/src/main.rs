use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use espo_cli::{cmd_compare, cmd_ingest, cmd_optimize, cmd_verify, CliError, Overrides};

#[derive(Parser)]
#[command(
    name = "espo",
    version,
    about = "Scenario-based evolutionary portfolio optimization"
)]
struct Cli {
    /// Override the seed from the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the per-generation log as CSV.
    #[arg(long, global = true)]
    log: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a daily price CSV into weekly-return scenarios.
    Ingest {
        /// Daily prices: `date` column then one column per ticker.
        prices: PathBuf,
        /// Scenario CSV to write.
        out: PathBuf,
    },
    /// Run the evolutionary optimizer and write a result JSON plus histogram CSV.
    Optimize {
        /// Scenario CSV.
        scenarios: PathBuf,
        /// Optimization config JSON.
        config: PathBuf,
        /// Result JSON to write.
        out: PathBuf,
        /// Histogram CSV path (default: <out>.histogram.csv).
        #[arg(long)]
        histogram: Option<PathBuf>,
        /// Force the probabilistic constraint on or off.
        #[arg(long)]
        constraint: Option<bool>,
    },
    /// Print mean / std.dev. / shortfall probability for results and 1/N.
    Compare {
        /// Scenario CSV the results are evaluated on.
        scenarios: PathBuf,
        /// Result JSON files; each becomes a column named after its file stem.
        #[arg(required = true)]
        results: Vec<PathBuf>,
        /// Shortfall threshold for the Prob. row.
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
    },
    /// Check the optimizer against exhaustive grid search (at most 5 assets).
    Verify {
        scenarios: PathBuf,
        config: PathBuf,
        /// Largest accepted relative fitness gap, evolved vs grid.
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
        /// Lattice step of the grid search.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Force the probabilistic constraint on or off.
        #[arg(long)]
        constraint: Option<bool>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut overrides = Overrides {
        seed: cli.seed,
        constraint: None,
        log: cli.log,
    };
    match cli.command {
        Command::Ingest { prices, out } => {
            let report = cmd_ingest(&prices, &out)?;
            println!("{} scenarios, {} assets", report.scenarios, report.assets);
        }
        Command::Optimize {
            scenarios,
            config,
            out,
            histogram,
            constraint,
        } => {
            overrides.constraint = constraint;
            let r = cmd_optimize(&scenarios, &config, &out, histogram.as_deref(), &overrides)?;
            println!(
                "mean {:.6}  std.dev. {:.6}  prob. {:.4}  f {:.6e}  p {:.6e}  f' {:.6e}  ({} generations, seed {})",
                r.mean, r.std_dev, r.shortfall_probability, r.raw_variance, r.penalty, r.fitness,
                r.generations_run, r.seed
            );
        }
        Command::Compare {
            scenarios,
            results,
            delta,
        } => print!("{}", cmd_compare(&scenarios, &results, delta)?),
        Command::Verify {
            scenarios,
            config,
            tolerance,
            step,
            constraint,
        } => {
            overrides.constraint = constraint;
            let (outcome, report) = cmd_verify(&scenarios, &config, step, tolerance, &overrides)?;
            print!("{report}");
            if !outcome.passed() {
                return Err(CliError::VerificationFailed {
                    gap: outcome.relative_gap,
                    tolerance,
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
