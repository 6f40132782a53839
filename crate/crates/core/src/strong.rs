//! Binary-search bi-greedy for strong DR-submodular objectives.
//!
//! Coordinate `i` is set from the signs of `∂F(0, X_{-i})` and
//! `∂F(1, Y_{-i})`, or else by bisecting on the equilibrium condition
//!
//! ```text
//! f(z) = ∂F(z, X_{-i}) (1 - z) + ∂F(z, Y_{-i}) z
//! ```
//!
//! which is non-increasing in `z` for strong objectives. The result is a
//! deterministic `2 F(z) >= F(x*) - 2 C eps` with `O(n log(n/eps))`
//! derivative evaluations.

use std::cell::Cell;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::{check_index, check_point, Objective, Slice};
use crate::rng;
use crate::solution::{CoordinateOrder, Solution};

/// `f(z) = ∂F(z, X_{-i})(1 - z) + ∂F(z, Y_{-i}) z`.
pub fn equilibrium_value<O: Objective + ?Sized>(
    obj: &O,
    x: &[f64],
    y: &[f64],
    i: usize,
    z: f64,
) -> Result<f64> {
    check_point(x, obj.dim())?;
    check_point(y, obj.dim())?;
    check_index(i, obj.dim())?;
    let mut p = x.to_vec();
    p[i] = z;
    let lower = obj.partial(&p, i)?;
    p.copy_from_slice(y);
    p[i] = z;
    let upper = obj.partial(&p, i)?;
    Ok(lower * (1.0 - z) + upper * z)
}

/// Most derivative evaluations a run may use: `n (2 + 2⌈log₂(n/eps)⌉)`.
pub fn derivative_budget(n: usize, epsilon: f64) -> u64 {
    n as u64 * (2 + 2 * max_iterations(n, epsilon))
}

fn max_iterations(n: usize, epsilon: f64) -> u64 {
    (n as f64 / epsilon).log2().ceil().max(0.0) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Both end derivatives say decrease.
    Zero,
    /// Both end derivatives say increase.
    One,
    Bisect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinaryTrace {
    pub i: usize,
    pub branch: Branch,
    /// `∂F(0, X_{-i})`.
    pub d0: f64,
    /// `∂F(1, Y_{-i})`.
    pub d1: f64,
    pub iterations: u32,
    pub chosen: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinaryConfig {
    pub epsilon: f64,
    pub order: CoordinateOrder,
    /// Only used to shuffle a random order.
    pub seed: u64,
}

impl Default for BinaryConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            order: CoordinateOrder::Sequential,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinaryOutput {
    pub solution: Solution,
    pub trace: Vec<BinaryTrace>,
}

struct Counted<'a> {
    slice: Box<dyn Slice + 'a>,
    calls: &'a Cell<u64>,
}

impl Counted<'_> {
    fn slope(&self, z: f64) -> Result<f64> {
        self.calls.set(self.calls.get() + 1);
        let d = self.slice.derivative(z)?;
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::NonFinite { z })
        }
    }
}

/// Runs over coordinates `0..n` in order.
pub fn run<O: Objective + ?Sized>(obj: &O, epsilon: f64) -> Result<BinaryOutput> {
    run_with(
        obj,
        &BinaryConfig {
            epsilon,
            ..BinaryConfig::default()
        },
    )
}

pub fn run_with<O: Objective + ?Sized>(obj: &O, config: &BinaryConfig) -> Result<BinaryOutput> {
    let eps = config.epsilon;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {eps}"
        )));
    }
    let start = Instant::now();
    let n = obj.dim();
    let width = eps / n as f64;
    let order = config.order.permutation(n, &mut rng::seeded(config.seed));
    let mut lower = vec![0.0; n];
    let mut upper = vec![1.0; n];
    let calls = Cell::new(0);
    let mut trace = Vec::with_capacity(n);

    for &i in &order {
        let along_lower = Counted {
            slice: obj.restrict(&lower, i)?,
            calls: &calls,
        };
        let along_upper = Counted {
            slice: obj.restrict(&upper, i)?,
            calls: &calls,
        };
        let d0 = along_lower.slope(0.0)?;
        let d1 = along_upper.slope(1.0)?;
        let mut iterations = 0;
        let (branch, chosen) = if d0 < 0.0 && d1 <= 0.0 {
            (Branch::Zero, 0.0)
        } else if d0 >= 0.0 && d1 > 0.0 {
            (Branch::One, 1.0)
        } else {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            let mut mid = 0.5 * (lo + hi);
            while hi - lo > width {
                mid = 0.5 * (lo + hi);
                let f = along_lower.slope(mid)? * (1.0 - mid) + along_upper.slope(mid)? * mid;
                if f > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                iterations += 1;
            }
            (Branch::Bisect, mid)
        };
        lower[i] = chosen;
        upper[i] = chosen;
        trace.push(BinaryTrace {
            i,
            branch,
            d0,
            d1,
            iterations,
            chosen,
        });
    }

    let value = obj.eval(&lower)?;
    let derivatives = calls.get();
    assert!(
        derivatives <= derivative_budget(n, eps),
        "{derivatives} derivative evaluations exceed the O(n log(n/eps)) budget"
    );
    Ok(BinaryOutput {
        solution: Solution {
            point: lower,
            value,
            oracle_calls: derivatives,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            order,
        },
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{FnObjective, QuadraticModel, Variant};

    fn parabola() -> QuadraticModel {
        QuadraticModel::new(1, vec![-2.0], vec![1.0], 0.0).unwrap()
    }

    #[test]
    fn equilibrium_value_examples() {
        let f = parabola();
        assert!(equilibrium_value(&f, &[0.0], &[1.0], 0, 0.5).unwrap().abs() < 1e-15);
        assert_eq!(equilibrium_value(&f, &[0.0], &[1.0], 0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn parabola_converges_to_half() {
        let f = parabola();
        let out = run(&f, 1e-3).unwrap();
        let z = out.solution.point[0];
        assert!((z - 0.5).abs() <= 1e-3);
        assert!(out.solution.value >= 0.25 - 2.0 * f.lipschitz() * 1e-3);
        assert_eq!(out.trace[0].branch, Branch::Bisect);
    }

    #[test]
    fn increasing_objective_goes_to_one() {
        let eps = 1e-3;
        let n = 4;
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            hessian[i * n + i] = -eps;
        }
        let f = QuadraticModel::new(n, hessian, vec![1.0; n], 0.0).unwrap();
        let out = run(&f, 0.01).unwrap();
        assert!(out.trace.iter().all(|t| t.branch == Branch::One));
        assert_eq!(out.solution.point, vec![1.0; n]);
    }

    #[test]
    fn decreasing_coordinate_goes_to_zero() {
        let f = QuadraticModel::new(2, vec![0.0; 4], vec![-1.0, 0.0], 1.0).unwrap();
        let out = run(&f, 0.01).unwrap();
        assert_eq!(out.trace[0].branch, Branch::Zero);
        assert_eq!(out.solution.point[0], 0.0);
        // Both end derivatives exactly zero: bisection, which goes left.
        assert_eq!(out.trace[1].branch, Branch::Bisect);
        assert!(out.solution.point[1] < 0.01);
    }

    #[test]
    fn iteration_and_call_counts_are_bounded() {
        for (n, eps) in [(1, 1e-3), (5, 0.01), (30, 0.05)] {
            let f = QuadraticModel::generate(n, 3, Variant::Strong).unwrap();
            let out = run(&f, eps).unwrap();
            let cap = max_iterations(n, eps) as u32 + 1;
            assert!(out.trace.iter().all(|t| t.iterations <= cap));
            assert!(out.solution.oracle_calls <= derivative_budget(n, eps));
        }
    }

    #[test]
    fn bisection_fixes_an_approximate_equilibrium() {
        let n = 6;
        let eps = 0.01;
        let f = QuadraticModel::generate(n, 8, Variant::Strong).unwrap();
        let out = run(&f, eps).unwrap();
        let c = f.lipschitz();
        let mut x = vec![0.0; n];
        let mut y = vec![1.0; n];
        for t in &out.trace {
            if t.branch == Branch::Bisect {
                let mut p = x.clone();
                p[t.i] = t.chosen;
                let alpha = f.partial(&p, t.i).unwrap();
                let mut q = y.clone();
                q[t.i] = t.chosen;
                let beta = -f.partial(&q, t.i).unwrap();
                let slack = 2.0 * c * eps / n as f64;
                assert!(alpha >= -slack && beta >= -slack);
                assert!((alpha * (1.0 - t.chosen) - beta * t.chosen).abs() <= slack);
            }
            x[t.i] = t.chosen;
            y[t.i] = t.chosen;
        }
    }

    #[test]
    fn deterministic_and_order_aware() {
        let f = QuadraticModel::generate(10, 1, Variant::Strong).unwrap();
        assert_eq!(
            run(&f, 0.01).unwrap().solution.point,
            run(&f, 0.01).unwrap().solution.point
        );
        let shuffled = BinaryConfig {
            order: CoordinateOrder::Random,
            seed: 4,
            ..BinaryConfig::default()
        };
        let a = run_with(&f, &shuffled).unwrap();
        assert_ne!(a.solution.order, (0..10).collect::<Vec<_>>());
        assert_eq!(
            a.solution.point,
            run_with(&f, &shuffled).unwrap().solution.point
        );
    }

    #[test]
    fn works_on_black_box_objectives() {
        let f = FnObjective::new(1, 1.0, |x: &[f64]| x[0] - x[0] * x[0]);
        let z = run(&f, 1e-3).unwrap().solution.point[0];
        assert!((z - 0.5).abs() <= 1e-3);
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert!(run(&parabola(), 0.0).is_err());
        assert!(run(&parabola(), f64::NAN).is_err());
    }
}
