use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bigreedy::harness::{self, Algorithm, ExperimentConfig};
use bigreedy::objective::{validate_submodularity, Family};
use bigreedy::{strong, weak, CoordinateOrder, Error, Instance, Variant};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bigreedy",
    version,
    about = "Bi-greedy maximization of continuous submodular functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one algorithm on an instance and print the solution as JSON.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        algo: Algorithm,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value = "sequential")]
        order: CoordinateOrder,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write per-coordinate records to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exhaustive maximum over the grid {0, 1/k, ..., 1}^n.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        grid: usize,
    },
    /// Check the Hessian sign pattern at random points.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        variant: Variant,
        #[arg(long, default_value_t = 10)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Repeated trials on fresh instances, summarized.
    Bench {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [Algorithm::Game, Algorithm::Binary])]
        algos: Vec<Algorithm>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Validation failed.
const EXIT_INVALID: u8 = 2;
/// Grid oracle lattice too large.
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::ValidationFailed { .. }) => ExitCode::from(EXIT_INVALID),
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(EXIT_BUDGET),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn load(path: &PathBuf) -> anyhow::Result<Instance> {
    Instance::load(path).with_context(|| format!("reading instance {}", path.display()))
}

fn execute(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Gen {
            family,
            n,
            seed,
            out,
        } => {
            Instance::generate(family, n, seed)?.save(&out)?;
            eprintln!(
                "wrote {family} instance (n = {n}, seed = {seed}) to {}",
                out.display()
            );
        }
        Command::Run {
            instance,
            algo,
            epsilon,
            order,
            seed,
            trace,
        } => {
            let instance = load(&instance)?;
            let (solution, records) = match algo {
                Algorithm::Game => {
                    let config = weak::RunConfig {
                        epsilon,
                        order,
                        seed,
                        record_trace: trace.is_some(),
                    };
                    let out = weak::run(&instance, &config)?;
                    (out.solution, serde_json::to_string_pretty(&out.trace)?)
                }
                Algorithm::Binary => {
                    let config = strong::BinaryConfig {
                        epsilon,
                        order,
                        seed,
                    };
                    let out = strong::run_with(&instance, &config)?;
                    (out.solution, serde_json::to_string_pretty(&out.trace)?)
                }
            };
            if let Some(path) = trace {
                std::fs::write(&path, records + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            println!("{}", serde_json::to_string_pretty(&solution)?);
        }
        Command::Oracle { instance, grid } => {
            let (point, value) = harness::grid_oracle(&load(&instance)?, grid)?;
            println!("{}", serde_json::json!({ "point": point, "value": value }));
        }
        Command::Validate {
            instance,
            variant,
            probes,
            seed,
        } => {
            let report = validate_submodularity(&load(&instance)?, variant, probes, seed)?;
            println!("{}", serde_json::to_string(&report)?);
            if !report.passed {
                eprintln!("instance is not {} DR-submodular", variant.as_str());
                return Ok(EXIT_INVALID);
            }
        }
        Command::Bench {
            family,
            n,
            trials,
            seed,
            epsilon,
            algos,
            out,
            csv,
        } => {
            let config = ExperimentConfig {
                family,
                n,
                trials,
                master_seed: seed,
                epsilon,
                algorithms: algos,
            };
            let summary = harness::run_experiment(&config)?;
            summary.write_json(&out)?;
            if let Some(path) = csv {
                summary.write_csv(path)?;
            }
            for (algo, s) in &summary.algorithms {
                println!(
                    "{family} n={n} {algo:<6} mean {:.6}  min {:.6}  q1 {:.6}  median {:.6}  q3 {:.6}  max {:.6}",
                    s.mean, s.min, s.q1, s.median, s.q3, s.max
                );
            }
        }
    }
    Ok(0)
}
