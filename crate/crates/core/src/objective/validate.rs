use rand::Rng;
use serde::Serialize;

use super::{Objective, Variant};
use crate::error::Result;
use crate::rng;

/// Second-order finite-difference step.
pub const HESSIAN_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    /// Most positive checked Hessian entry; `None` when no entry is
    /// constrained (weak check with `n = 1`).
    pub worst_violation: Option<f64>,
    pub tolerance: f64,
}

/// Checks the Hessian sign pattern of `obj` at `probes` random interior
/// points.
///
/// Objectives with analytic partials get Hessian columns from central
/// differences of the gradient; black boxes use central second differences
/// of values. Entries must be `<= 1e-6 · max(1, C)`; the weak variant only
/// constrains off-diagonal entries.
pub fn validate_submodularity<O: Objective + ?Sized>(
    obj: &O,
    variant: Variant,
    probes: usize,
    seed: u64,
) -> Result<ValidationReport> {
    let n = obj.dim();
    let h = HESSIAN_STEP;
    let tolerance = 1e-6 * obj.lipschitz().max(1.0);
    let mut rng = rng::seeded(seed);
    let mut worst: Option<f64> = None;
    let mut note = |i: usize, j: usize, v: f64| {
        if i != j || variant == Variant::Strong {
            worst = Some(worst.map_or(v, |w: f64| w.max(v)));
        }
    };

    for _ in 0..probes.max(1) {
        let x: Vec<f64> = (0..n)
            .map(|_| 2.0 * h + (1.0 - 4.0 * h) * rng.random::<f64>())
            .collect();
        if obj.has_analytic_partial() {
            let mut p = x.clone();
            for j in 0..n {
                p[j] = x[j] + h;
                let up = obj.gradient(&p)?;
                p[j] = x[j] - h;
                let down = obj.gradient(&p)?;
                p[j] = x[j];
                for i in 0..n {
                    note(i, j, (up[i] - down[i]) / (2.0 * h));
                }
            }
        } else {
            let mut p = x.clone();
            let mut at = |moves: &[(usize, f64)]| {
                p.copy_from_slice(&x);
                for &(k, d) in moves {
                    p[k] += d;
                }
                obj.eval(&p)
            };
            let centre = at(&[])?;
            for i in 0..n {
                if variant == Variant::Strong {
                    let d2 = (at(&[(i, h)])? - 2.0 * centre + at(&[(i, -h)])?) / (h * h);
                    note(i, i, d2);
                }
                for j in i + 1..n {
                    let mixed = (at(&[(i, h), (j, h)])?
                        - at(&[(i, h), (j, -h)])?
                        - at(&[(i, -h), (j, h)])?
                        + at(&[(i, -h), (j, -h)])?)
                        / (4.0 * h * h);
                    note(i, j, mixed);
                }
            }
        }
    }

    Ok(ValidationReport {
        passed: worst.is_none_or(|w| w <= tolerance),
        worst_violation: worst,
        tolerance,
    })
}
