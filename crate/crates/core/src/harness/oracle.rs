use crate::error::{Error, Result};
use crate::objective::Objective;

/// Largest lattice the grid oracle will enumerate.
pub const ORACLE_LIMIT: f64 = 1e8;

/// Exhaustive maximum of `obj` over `{0, 1/k, …, 1}^n`.
///
/// Points are visited in lexicographic order and only a strict improvement
/// replaces the incumbent, so ties go to the lexicographically smallest
/// point. The last coordinate is scanned through [`Objective::restrict`].
pub fn grid_oracle<O: Objective + ?Sized>(obj: &O, k: usize) -> Result<(Vec<f64>, f64)> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "grid resolution must be positive".into(),
        ));
    }
    let n = obj.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let points = ((k + 1) as f64).powi(n as i32);
    if points > ORACLE_LIMIT {
        return Err(Error::BudgetExceeded {
            points,
            limit: ORACLE_LIMIT,
        });
    }
    let level = |j: usize| j as f64 / k as f64;
    let last = n - 1;
    let mut digits = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let slice = obj.restrict(&x, last)?;
        for j in 0..=k {
            let z = level(j);
            let v = slice.value(z)?;
            if !v.is_finite() {
                return Err(Error::NonFinite { z });
            }
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                digits[last] = j;
                best = Some((digits.clone(), v));
            }
        }
        // Advance the prefix odometer.
        let mut pos = last;
        loop {
            if pos == 0 {
                let (idx, _) = best.expect("lattice is non-empty");
                let point: Vec<f64> = idx.into_iter().map(level).collect();
                let value = obj.eval(&point)?;
                return Ok((point, value));
            }
            pos -= 1;
            if digits[pos] < k {
                digits[pos] += 1;
                x[pos] = level(digits[pos]);
                break;
            }
            digits[pos] = 0;
            x[pos] = 0.0;
        }
    }
}
