//! Brute-force reference oracle and the seeded benchmark runner.

mod experiment;
mod oracle;
mod stats;

pub use experiment::{
    ensure_valid, run_experiment, Algorithm, ExperimentConfig, ExperimentSummary, TrialReport,
    SCHEMA_VERSION,
};
pub use oracle::{grid_oracle, ORACLE_LIMIT};
pub use stats::{standard_error, Summary};
