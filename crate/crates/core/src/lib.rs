//! Bi-greedy maximization of continuous non-monotone submodular functions
//! over the unit hypercube `[0,1]^n`.
//!
//! Two algorithms are provided:
//!
//! * [`weak::run`], the randomized game-based bi-greedy for weak DR-submodular
//!   (continuous submodular) objectives. Each coordinate is fixed by playing a
//!   two-point mixed strategy read off the upper concave envelope of the curve
//!   `r(z) = (g(z), h(z))`.
//! * [`strong::run`], the deterministic binary-search bi-greedy for strong
//!   DR-submodular objectives, which bisects on a monotone equilibrium
//!   condition built from partial derivatives.
//!
//! Both reach `2 F(z) >= F(x*) - 2 C eps` (in expectation for the randomized
//! variant) where `C` is the coordinate-wise Lipschitz constant.
//!
//! The [`game`] module exposes the per-coordinate zero-sum game used to check
//! the randomized strategy, and [`harness`] holds the brute-force grid oracle
//! and the benchmark runner used by the `bigreedy` CLI.

pub mod envelope;
pub mod error;
pub mod game;
pub(crate) mod grid;
pub mod harness;
pub mod objective;
pub mod rng;
pub mod solution;
pub mod strong;
pub mod weak;

pub use error::{Error, Result};
pub use objective::{Instance, Objective, QuadraticModel, SoftmaxModel, Variant};
pub use solution::{CoordinateOrder, Solution};
