use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, got {given}")]
    DimensionMismatch { expected: usize, given: usize },

    #[error("point outside the unit box at coordinate {index}: {value}")]
    OutOfBox { index: usize, value: f64 },

    #[error("coordinate index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("softmax matrix not positive definite at x")]
    NotPositiveDefinite,

    #[error("non-finite function value at z = {z}")]
    NonFinite { z: f64 },

    #[error("envelope needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("single-crossing violated: no envelope edge straddles h - g = {target}")]
    SingleCrossingViolated { target: f64 },

    #[error("grid oracle budget exceeded: {points} points > {limit}; use a smaller n or grid resolution")]
    BudgetExceeded { points: f64, limit: f64 },

    #[error("instance seed {seed} failed the {variant} submodularity check (worst entry {worst})")]
    ValidationFailed {
        seed: u64,
        variant: &'static str,
        worst: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
