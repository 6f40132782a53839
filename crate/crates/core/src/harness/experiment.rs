use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::stats::Summary;
use crate::error::{Error, Result};
use crate::objective::{validate_submodularity, Family, Instance};
use crate::solution::{CoordinateOrder, Solution};
use crate::{strong, weak};

pub const SCHEMA_VERSION: u32 = 1;

/// Hessian probes per generated instance.
const VALIDATION_PROBES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Randomized game-based bi-greedy.
    Game,
    /// Binary-search bi-greedy.
    Binary,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Game => "game",
            Algorithm::Binary => "binary",
        }
    }

    /// Runs on `instance` with coordinates visited in `order`. `seed` drives
    /// the order shuffle and, for [`Algorithm::Game`], the strategy draws.
    pub fn run(
        self,
        instance: &Instance,
        epsilon: f64,
        order: CoordinateOrder,
        seed: u64,
    ) -> Result<Solution> {
        match self {
            Algorithm::Game => {
                let config = weak::RunConfig {
                    epsilon,
                    order,
                    seed,
                    record_trace: false,
                };
                Ok(weak::run(instance, &config)?.solution)
            }
            Algorithm::Binary => {
                let config = strong::BinaryConfig {
                    epsilon,
                    order,
                    seed,
                };
                Ok(strong::run_with(instance, &config)?.solution)
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "game" => Ok(Algorithm::Game),
            "binary" => Ok(Algorithm::Binary),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub instance_seed: u64,
    pub algorithm: Algorithm,
    pub objective_value: f64,
    pub oracle_calls: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub epsilon: f64,
    pub algorithms: Vec<Algorithm>,
}

impl ExperimentConfig {
    /// Both algorithms, `eps = 0.01`.
    pub fn new(family: Family, n: usize, trials: usize, master_seed: u64) -> Self {
        Self {
            family,
            n,
            trials,
            master_seed,
            epsilon: 0.01,
            algorithms: vec![Algorithm::Game, Algorithm::Binary],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub schema: u32,
    pub family: Family,
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub epsilon: f64,
    pub algorithms: BTreeMap<Algorithm, Summary>,
    pub reports: Vec<TrialReport>,
    /// SHA-256 of this document with `digest` emptied and every
    /// `elapsed_ms` zeroed.
    pub digest: String,
}

impl ExperimentSummary {
    fn fingerprint(&self) -> Result<String> {
        let mut stripped = self.clone();
        stripped.digest.clear();
        for r in &mut stripped.reports {
            r.elapsed_ms = 0.0;
        }
        let hash = Sha256::digest(serde_json::to_vec(&stripped)?);
        Ok(hash.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// One row per (trial, algorithm): `family,n,trial,algorithm,value,oracle_calls`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = csv::Writer::from_path(path)?;
        out.write_record(["family", "n", "trial", "algorithm", "value", "oracle_calls"])?;
        for r in &self.reports {
            out.write_record([
                self.family.as_str().to_string(),
                self.n.to_string(),
                r.trial.to_string(),
                r.algorithm.as_str().to_string(),
                r.objective_value.to_string(),
                r.oracle_calls.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Mean objective value of `algorithm`, if it was run.
    pub fn mean(&self, algorithm: Algorithm) -> Option<f64> {
        self.algorithms.get(&algorithm).map(|s| s.mean)
    }
}

/// Checks `instance` against the property its family promises, reporting
/// its seed on failure.
pub fn ensure_valid(instance: &Instance) -> Result<()> {
    let variant = instance.family.variant();
    let report = validate_submodularity(instance, variant, VALIDATION_PROBES, instance.seed)?;
    if report.passed {
        Ok(())
    } else {
        Err(Error::ValidationFailed {
            seed: instance.seed,
            variant: variant.as_str(),
            worst: report.worst_violation.unwrap_or(f64::NAN),
        })
    }
}

fn run_trial(config: &ExperimentConfig, trial: usize) -> Result<Vec<TrialReport>> {
    let seed = config.master_seed.wrapping_add(trial as u64);
    let instance = Instance::generate(config.family, config.n, seed)?;
    ensure_valid(&instance)?;
    config
        .algorithms
        .iter()
        .map(|&algorithm| {
            let solution =
                algorithm.run(&instance, config.epsilon, CoordinateOrder::Random, seed)?;
            Ok(TrialReport {
                trial,
                instance_seed: seed,
                algorithm,
                objective_value: solution.value,
                oracle_calls: solution.oracle_calls,
                elapsed_ms: solution.elapsed_ms,
            })
        })
        .collect()
}

/// Runs `config.trials` independent trials on a thread pool. Trial `t` uses
/// instance seed `master_seed + t`; every algorithm sees the same instance.
/// The first failing trial (by index) aborts the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if config.algorithms.is_empty() {
        return Err(Error::InvalidArgument("no algorithm requested".into()));
    }
    let workers = thread::available_parallelism()
        .map_or(1, |p| p.get())
        .min(config.trials);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Vec<TrialReport>>>>> =
        Mutex::new((0..config.trials).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::Relaxed);
                if t >= config.trials {
                    break;
                }
                let outcome = run_trial(config, t);
                results.lock().expect("result slot poisoned")[t] = Some(outcome);
            });
        }
    });

    let mut reports = Vec::with_capacity(config.trials * config.algorithms.len());
    for slot in results.into_inner().expect("result slot poisoned") {
        reports.extend(slot.expect("every trial ran")?);
    }
    let algorithms = config
        .algorithms
        .iter()
        .map(|&a| {
            let values: Vec<f64> = reports
                .iter()
                .filter(|r| r.algorithm == a)
                .map(|r| r.objective_value)
                .collect();
            (a, Summary::from_values(&values).expect("trials >= 1"))
        })
        .collect();

    let mut summary = ExperimentSummary {
        schema: SCHEMA_VERSION,
        family: config.family,
        n: config.n,
        trials: config.trials,
        master_seed: config.master_seed,
        epsilon: config.epsilon,
        algorithms,
        reports,
        digest: String::new(),
    };
    summary.digest = summary.fingerprint()?;
    Ok(summary)
}
