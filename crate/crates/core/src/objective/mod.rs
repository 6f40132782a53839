//! Objective functions on the unit hypercube.
//!
//! An [`Objective`] is a deterministic map `[0,1]^n -> R` with a
//! coordinate-wise Lipschitz bound `C`. The algorithms only ever look at
//! one coordinate at a time, so objectives can hand out a [`Slice`]: the
//! univariate restriction `z -> F(z, x_{-i})`. The quadratic and softmax
//! families override [`Objective::restrict`] with closed forms that cost
//! O(1) per evaluation after setup.

mod instance;
mod quadratic;
mod softmax;
mod validate;

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use instance::{Family, Instance, Model};
pub use quadratic::QuadraticModel;
pub use softmax::SoftmaxModel;
pub use validate::{validate_submodularity, ValidationReport};

/// Tolerance on box membership.
pub const BOX_TOL: f64 = 1e-12;

/// First-order finite-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Which diminishing-returns property an objective is expected to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// All Hessian entries non-positive (DR-submodular).
    Strong,
    /// Off-diagonal Hessian entries non-positive (continuous submodular).
    Weak,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Strong => "strong",
            Variant::Weak => "weak",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(Variant::Strong),
            "weak" => Ok(Variant::Weak),
            other => Err(Error::InvalidArgument(format!("unknown variant {other:?}"))),
        }
    }
}

/// A function `F: [0,1]^n -> R` to be maximized.
///
/// Implementations must be immutable after construction: `eval` and
/// `partial` may be called concurrently.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[f64]) -> Result<f64>;

    /// Coordinate-wise Lipschitz constant `C`.
    fn lipschitz(&self) -> f64;

    /// Closed-form `dF/dx_i`, if the objective has one.
    fn analytic_partial(&self, _x: &[f64], _i: usize) -> Option<Result<f64>> {
        None
    }

    fn has_analytic_partial(&self) -> bool {
        false
    }

    /// `dF/dx_i` at `x`. Falls back to finite differences.
    fn partial(&self, x: &[f64], i: usize) -> Result<f64> {
        check_point(x, self.dim())?;
        check_index(i, self.dim())?;
        match self.analytic_partial(x, i) {
            Some(d) => d,
            None => finite_difference_partial(self, x, i),
        }
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        (0..self.dim()).map(|i| self.partial(x, i)).collect()
    }

    /// The restriction `z -> F(z, x_{-i})`.
    fn restrict<'a>(&'a self, x: &[f64], i: usize) -> Result<Box<dyn Slice + 'a>> {
        Ok(Box::new(LineSlice::new(self, x, i)?))
    }
}

/// A univariate restriction of an objective to one coordinate line.
pub trait Slice {
    fn value(&self, z: f64) -> Result<f64>;
    fn derivative(&self, z: f64) -> Result<f64>;
}

/// Generic slice that evaluates the full objective at every call.
pub struct LineSlice<'a, O: ?Sized> {
    obj: &'a O,
    point: RefCell<Vec<f64>>,
    index: usize,
}

impl<'a, O: Objective + ?Sized> LineSlice<'a, O> {
    pub fn new(obj: &'a O, x: &[f64], index: usize) -> Result<Self> {
        check_point(x, obj.dim())?;
        check_index(index, obj.dim())?;
        Ok(Self {
            obj,
            point: RefCell::new(x.to_vec()),
            index,
        })
    }

    fn with_coordinate<T>(&self, z: f64, f: impl FnOnce(&[f64]) -> Result<T>) -> Result<T> {
        let mut point = self.point.borrow_mut();
        point[self.index] = z;
        f(&point)
    }
}

impl<O: Objective + ?Sized> Slice for LineSlice<'_, O> {
    fn value(&self, z: f64) -> Result<f64> {
        self.with_coordinate(z, |x| self.obj.eval(x))
    }

    fn derivative(&self, z: f64) -> Result<f64> {
        self.with_coordinate(z, |x| self.obj.partial(x, self.index))
    }
}

/// A user-supplied black-box objective.
pub struct FnObjective<F> {
    n: usize,
    lipschitz: f64,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(n: usize, lipschitz: f64, f: F) -> Self {
        Self { n, lipschitz, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        check_point(x, self.n)?;
        Ok((self.f)(x))
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

pub(crate) fn check_point(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            given: x.len(),
        });
    }
    for (index, &value) in x.iter().enumerate() {
        if !(-BOX_TOL..=1.0 + BOX_TOL).contains(&value) {
            return Err(Error::OutOfBox { index, value });
        }
    }
    Ok(())
}

pub(crate) fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// Finite-difference `dF/dx_i`: central with step [`FD_STEP`] when both
/// neighbours stay inside the box, otherwise the second-order one-sided
/// stencil pointing into the box.
pub fn finite_difference_partial<O: Objective + ?Sized>(
    obj: &O,
    x: &[f64],
    i: usize,
) -> Result<f64> {
    let mut p = x.to_vec();
    let xi = x[i];
    let h = FD_STEP;
    let mut at = |z: f64| {
        p[i] = z;
        obj.eval(&p)
    };
    if xi - h >= 0.0 && xi + h <= 1.0 {
        Ok((at(xi + h)? - at(xi - h)?) / (2.0 * h))
    } else if xi - h < 0.0 {
        Ok((-3.0 * at(xi)? + 4.0 * at(xi + h)? - at(xi + 2.0 * h)?) / (2.0 * h))
    } else {
        Ok((3.0 * at(xi)? - 4.0 * at(xi - h)? + at(xi - 2.0 * h)?) / (2.0 * h))
    }
}
