use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Order in which coordinates are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinateOrder {
    #[default]
    Sequential,
    /// Fisher–Yates shuffle drawn from the run's random source.
    Random,
}

impl std::str::FromStr for CoordinateOrder {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "sequential" => Ok(CoordinateOrder::Sequential),
            "random" => Ok(CoordinateOrder::Random),
            other => Err(crate::Error::InvalidArgument(format!(
                "unknown order {other:?}"
            ))),
        }
    }
}

impl CoordinateOrder {
    pub fn permutation<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        if self == CoordinateOrder::Random {
            order.shuffle(rng);
        }
        order
    }
}

/// Final point of a run and its cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub point: Vec<f64>,
    pub value: f64,
    /// Objective evaluations (randomized bi-greedy) or derivative
    /// evaluations (binary-search bi-greedy).
    pub oracle_calls: u64,
    pub elapsed_ms: f64,
    /// Coordinates in the order they were fixed.
    pub order: Vec<usize>,
}
