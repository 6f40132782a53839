//! Continuous randomized bi-greedy for weak DR-submodular objectives.
//!
//! Two frontiers start at `X = 0` and `Y = 1`. For each coordinate `i`
//! the algorithm finds `Z_l`, a grid argmax of `F(·, Y_{-i})`, and `Z_u`, a
//! grid argmax of `F(·, X_{-i})`. When `Z_u <= Z_l` it fixes `Z_l`.
//! Otherwise it samples the curve
//!
//! ```text
//! g(z) = F(z, X_{-i}) - F(Z_l, X_{-i}),   h(z) = F(z, Y_{-i}) - F(Z_u, Y_{-i})
//! ```
//!
//! on `[Z_l, Z_u]`, takes its upper concave envelope and plays the two-point
//! mix whose mean lies on `h' - β = g' - α`, with `α = g(Z_u)` and
//! `β = h(Z_l)`. In expectation `2 F(z) >= F(x*) - 2 C eps`.

use std::cell::Cell;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::envelope::{self, CurveSample, Envelope, MixedStrategy};
use crate::error::{Error, Result};
use crate::grid;
use crate::objective::{Objective, Slice};
use crate::rng;
use crate::solution::{CoordinateOrder, Solution};

/// Frontiers of the bi-greedy. `lower <= upper` componentwise and the two
/// agree on every fixed coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BiGreedyState {
    lower: Vec<f64>,
    upper: Vec<f64>,
    fixed: Vec<bool>,
}

impl BiGreedyState {
    pub fn new(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            upper: vec![1.0; n],
            fixed: vec![false; n],
        }
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed[i]
    }

    pub fn fix(&mut self, i: usize, z: f64) {
        self.lower[i] = z;
        self.upper[i] = z;
        self.fixed[i] = true;
    }

    /// The common point once every coordinate is fixed.
    pub fn point(&self) -> Option<&[f64]> {
        self.fixed.iter().all(|&f| f).then_some(&self.lower[..])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    /// Grid spacing for the 1-D argmax and the curve samples.
    pub epsilon: f64,
    pub order: CoordinateOrder,
    pub seed: u64,
    pub record_trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            order: CoordinateOrder::Sequential,
            seed: 0,
            record_trace: false,
        }
    }
}

impl RunConfig {
    fn check(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0, 0.5], got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Per-coordinate trace record. Fields other than `i`, `z_l`, `z_u` and
/// `chosen` are `None` when the deterministic branch was taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordinateTrace {
    pub i: usize,
    #[serde(rename = "Z_l")]
    pub z_l: f64,
    #[serde(rename = "Z_u")]
    pub z_u: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub lambda: Option<f64>,
    pub z1: Option<f64>,
    pub z2: Option<f64>,
    pub chosen: f64,
}

/// The sampled curve and what was built from it.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGeometry {
    pub samples: Vec<CurveSample>,
    pub envelope: Envelope,
    pub strategy: MixedStrategy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub chosen: f64,
    pub record: CoordinateTrace,
    /// Present when `Z_l < Z_u`.
    pub geometry: Option<StepGeometry>,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub solution: Solution,
    /// Empty unless `record_trace` was set.
    pub trace: Vec<CoordinateTrace>,
}

/// Upper bound on objective evaluations for one run: `8n/eps + 12n`.
pub fn evaluation_budget(n: usize, epsilon: f64) -> f64 {
    8.0 * n as f64 / epsilon + 12.0 * n as f64
}

/// Grid argmax over `0, eps, 2 eps, …, 1`. The first strict improvement
/// wins, so ties go to the smallest `z`.
fn grid_argmax(mut f: impl FnMut(f64) -> Result<f64>, eps: f64) -> Result<(f64, f64)> {
    let mut best = (0.0, f64::NEG_INFINITY);
    for z in grid::points(0.0, 1.0, eps) {
        let v = f(z)?;
        if !v.is_finite() {
            return Err(Error::NonFinite { z });
        }
        if v > best.1 {
            best = (z, v);
        }
    }
    Ok(best)
}

/// Approximate maximizer of `f` on `[0, 1]`: scans the grid of spacing
/// `delta / c` and returns the first point attaining the grid maximum.
/// `f(result) >= max f - delta` when `f` is `c`-Lipschitz.
pub fn approx_argmax_1d(f: impl FnMut(f64) -> Result<f64>, delta: f64, c: f64) -> Result<f64> {
    if !(delta > 0.0 && c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta and C must be positive (delta = {delta}, C = {c})"
        )));
    }
    grid_argmax(f, (delta / c).min(1.0)).map(|(z, _)| z)
}

struct Counted<'a> {
    slice: Box<dyn Slice + 'a>,
    calls: &'a Cell<u64>,
}

impl Counted<'_> {
    fn at(&self, z: f64) -> Result<f64> {
        self.calls.set(self.calls.get() + 1);
        self.slice.value(z)
    }
}

/// Fixes coordinate `i` of `state`.
pub fn coordinate_step<O, R>(
    obj: &O,
    state: &mut BiGreedyState,
    i: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<Step>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    if state.is_fixed(i) {
        return Err(Error::InvalidArgument(format!(
            "coordinate {i} is already fixed"
        )));
    }
    let calls = Cell::new(0);
    let along_lower = Counted {
        slice: obj.restrict(state.lower(), i)?,
        calls: &calls,
    };
    let along_upper = Counted {
        slice: obj.restrict(state.upper(), i)?,
        calls: &calls,
    };

    let (z_l, _) = grid_argmax(|z| along_upper.at(z), epsilon)?;
    let (z_u, _) = grid_argmax(|z| along_lower.at(z), epsilon)?;

    let mut record = CoordinateTrace {
        i,
        z_l,
        z_u,
        alpha: None,
        beta: None,
        lambda: None,
        z1: None,
        z2: None,
        chosen: z_l,
    };

    let geometry = if z_u <= z_l {
        None
    } else {
        let g_ref = along_lower.at(z_l)?;
        let h_ref = along_upper.at(z_u)?;
        let samples = envelope::sample_curve(
            |z| Ok(along_lower.at(z)? - g_ref),
            |z| Ok(along_upper.at(z)? - h_ref),
            z_l,
            z_u,
            epsilon,
        )?;
        let env = envelope::upper_concave_envelope(&samples)?;
        let strategy = envelope::intersect_diagonal(&env)?;
        record.chosen = match strategy {
            MixedStrategy::Pure(p) => p.z,
            MixedStrategy::TwoPoint { .. } => strategy.realize(rng.random::<f64>()),
        };
        record.alpha = Some(env.alpha);
        record.beta = Some(env.beta);
        record.lambda = Some(strategy.lambda());
        record.z1 = Some(strategy.first().z);
        record.z2 = Some(strategy.second().z);
        Some(StepGeometry {
            samples,
            envelope: env,
            strategy,
        })
    };

    state.fix(i, record.chosen);
    Ok(Step {
        chosen: record.chosen,
        record,
        geometry,
        evaluations: calls.get(),
    })
}

/// Runs the randomized bi-greedy with a source seeded from `config.seed`.
pub fn run<O: Objective + ?Sized>(obj: &O, config: &RunConfig) -> Result<RunOutput> {
    let mut rng = rng::seeded(config.seed);
    run_with_rng(obj, config, &mut rng)
}

/// Runs the randomized bi-greedy. The coordinate order is drawn first, then
/// one uniform per two-point coordinate, in coordinate order.
pub fn run_with_rng<O, R>(obj: &O, config: &RunConfig, rng: &mut R) -> Result<RunOutput>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    config.check()?;
    let start = Instant::now();
    let n = obj.dim();
    let order = config.order.permutation(n, rng);
    let mut state = BiGreedyState::new(n);
    let mut evaluations = 0;
    let mut trace = Vec::new();
    for &i in &order {
        let step = coordinate_step(obj, &mut state, i, config.epsilon, rng)?;
        evaluations += step.evaluations;
        if config.record_trace {
            trace.push(step.record);
        }
    }
    let point = state.lower().to_vec();
    let value = obj.eval(&point)?;
    evaluations += 1;
    assert!(
        evaluations as f64 <= evaluation_budget(n, config.epsilon),
        "{evaluations} evaluations exceed the O(n/eps) budget"
    );
    Ok(RunOutput {
        solution: Solution {
            point,
            value,
            oracle_calls: evaluations,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            order,
        },
        trace,
    })
}
