use rand::Rng;

use super::{check_index, check_point, Objective, Slice, Variant};
use crate::error::{Error, Result};
use crate::rng;

/// Non-concave quadratic `F(x) = ½ xᵀHx + hᵀx + c`.
///
/// `hessian` is stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    n: usize,
    hessian: Vec<f64>,
    linear: Vec<f64>,
    offset: f64,
}

impl QuadraticModel {
    pub fn new(n: usize, hessian: Vec<f64>, linear: Vec<f64>, offset: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if hessian.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                given: hessian.len(),
            });
        }
        if linear.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                given: linear.len(),
            });
        }
        Ok(Self {
            n,
            hessian,
            linear,
            offset,
        })
    }

    /// Random NQP instance. `H` has i.i.d. uniform `[-1, 0]` entries and is
    /// symmetrized by averaging with its transpose; the weak variant then
    /// redraws the diagonal uniformly in `[0, 1]`. `h` is uniform in
    /// `[0, 1]` and `c` is solved so that `F(0) + F(1) = 0`.
    pub fn generate(n: usize, seed: u64, variant: Variant) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mut rng = rng::seeded(seed);
        let raw: Vec<f64> = (0..n * n).map(|_| -rng.random::<f64>()).collect();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                hessian[i * n + j] = 0.5 * (raw[i * n + j] + raw[j * n + i]);
            }
        }
        if variant == Variant::Weak {
            for i in 0..n {
                hessian[i * n + i] = rng.random::<f64>();
            }
        }
        let linear: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();

        // F(0) = c and F(1) = ½ΣH + Σh + c.
        let half_sum: f64 = 0.5 * hessian.iter().sum::<f64>();
        let lin_sum: f64 = linear.iter().sum();
        let offset = -0.5 * (half_sum + lin_sum);
        Self::new(n, hessian, linear, offset)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hessian(&self) -> &[f64] {
        &self.hessian
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.hessian[i * self.n + j]
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.hessian[i * self.n..(i + 1) * self.n]
    }

    fn value_unchecked(&self, x: &[f64]) -> f64 {
        let quad: f64 = (0..self.n)
            .map(|i| x[i] * self.row(i).iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .sum();
        let lin: f64 = self.linear.iter().zip(x).map(|(a, b)| a * b).sum();
        0.5 * quad + lin + self.offset
    }

    fn partial_unchecked(&self, x: &[f64], i: usize) -> f64 {
        self.row(i).iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.linear[i]
    }

    /// Whether the sign pattern of `H` matches the variant.
    pub fn satisfies(&self, variant: Variant) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| (i == j && variant == Variant::Weak) || self.entry(i, j) <= 0.0)
        })
    }
}

impl Objective for QuadraticModel {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        check_point(x, self.n)?;
        Ok(self.value_unchecked(x))
    }

    /// `max_i (|h_i| + Σ_j |H_ij|)`, a bound on `|∂F/∂x_i|` over the box.
    fn lipschitz(&self) -> f64 {
        (0..self.n)
            .map(|i| self.linear[i].abs() + self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    fn analytic_partial(&self, x: &[f64], i: usize) -> Option<Result<f64>> {
        Some(Ok(self.partial_unchecked(x, i)))
    }

    fn has_analytic_partial(&self) -> bool {
        true
    }

    fn restrict<'a>(&'a self, x: &[f64], i: usize) -> Result<Box<dyn Slice + 'a>> {
        check_point(x, self.n)?;
        check_index(i, self.n)?;
        let mut base_point = x.to_vec();
        base_point[i] = 0.0;
        let base = self.value_unchecked(&base_point);
        let slope = self.partial_unchecked(&base_point, i);
        Ok(Box::new(QuadraticSlice {
            base,
            slope,
            curvature: self.entry(i, i),
        }))
    }
}

/// `F(z) = base + slope·z + ½·curvature·z²`.
struct QuadraticSlice {
    base: f64,
    slope: f64,
    curvature: f64,
}

impl Slice for QuadraticSlice {
    fn value(&self, z: f64) -> Result<f64> {
        Ok(self.base + self.slope * z + 0.5 * self.curvature * z * z)
    }

    fn derivative(&self, z: f64) -> Result<f64> {
        Ok(self.slope + self.curvature * z)
    }
}
