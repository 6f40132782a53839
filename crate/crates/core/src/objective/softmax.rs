use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_index, check_point, Objective, Slice};
use crate::error::{Error, Result};
use crate::rng;

/// Probes used to estimate the Lipschitz constant.
const LIPSCHITZ_PROBES: usize = 200;
const LIPSCHITZ_HEADROOM: f64 = 1.2;

/// Softmax extension `F(x) = log det(diag(x)(L - I) + I)` of a DPP kernel `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxModel {
    kernel: DMatrix<f64>,
    /// `L - I`, cached.
    shifted: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    lipschitz: f64,
}

impl SoftmaxModel {
    /// Builds a model from a kernel. `eigenvalues` are recomputed when not
    /// supplied; `probe_seed` drives the Lipschitz estimate.
    pub fn from_kernel(
        kernel: DMatrix<f64>,
        eigenvalues: Option<Vec<f64>>,
        probe_seed: u64,
    ) -> Result<Self> {
        let n = kernel.nrows();
        if n == 0 || kernel.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "kernel must be square and non-empty, got {}x{}",
                kernel.nrows(),
                kernel.ncols()
            )));
        }
        let eigenvalues = match eigenvalues {
            Some(e) if e.len() == n => e,
            Some(e) => {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    given: e.len(),
                })
            }
            None => kernel
                .clone()
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect(),
        };
        let shifted = &kernel - DMatrix::<f64>::identity(n, n);
        let mut model = Self {
            kernel,
            shifted,
            eigenvalues,
            lipschitz: 0.0,
        };
        model.lipschitz = model.estimate_lipschitz(probe_seed)?;
        Ok(model)
    }

    /// Random kernel `L = V D Vᵀ` with eigenvalues `e^u`, `u ~ U[-0.5, 1.0]`,
    /// and `V` the sign-normalized Q factor of a standard Gaussian matrix.
    pub fn generate(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mut rng = rng::seeded(seed);
        let eigenvalues: Vec<f64> = (0..n)
            .map(|_| (-0.5 + 1.5 * rng.random::<f64>()).exp())
            .collect();
        let gaussian: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
        let g = DMatrix::from_row_slice(n, n, &gaussian);

        let qr = g.qr();
        let r = qr.r();
        let mut v = qr.q();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                v.column_mut(j).neg_mut();
            }
        }
        let d = DMatrix::from_diagonal(&DVector::from_column_slice(&eigenvalues));
        let l = &v * d * v.transpose();
        let kernel = (&l + l.transpose()) * 0.5;
        Self::from_kernel(kernel, Some(eigenvalues), seed)
    }

    pub fn n(&self) -> usize {
        self.kernel.nrows()
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `diag(x)(L - I) + I`.
    fn system(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| {
            x[i] * self.shifted[(i, j)] + if i == j { 1.0 } else { 0.0 }
        })
    }

    fn log_det_and_inverse(&self, x: &[f64]) -> Result<(f64, DMatrix<f64>)> {
        let lu = self.system(x).lu();
        let log_det = lu_log_det(&lu)?;
        let inverse = lu.try_inverse().ok_or(Error::NotPositiveDefinite)?;
        Ok((log_det, inverse))
    }

    /// Max absolute analytic partial over seeded random probes, plus headroom.
    fn estimate_lipschitz(&self, seed: u64) -> Result<f64> {
        let n = self.n();
        let mut rng = rng::seeded(seed ^ 0x5eed_11b5);
        let mut worst: f64 = 0.0;
        for _ in 0..LIPSCHITZ_PROBES {
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            for g in self.gradient(&x)? {
                worst = worst.max(g.abs());
            }
        }
        Ok((LIPSCHITZ_HEADROOM * worst).max(f64::MIN_POSITIVE))
    }
}

fn lu_log_det(lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>) -> Result<f64> {
    let u = lu.u();
    let mut sign = lu.p().determinant::<f64>();
    let mut log_det = 0.0;
    for k in 0..u.nrows() {
        let pivot = u[(k, k)];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        sign *= pivot.signum();
        log_det += pivot.abs().ln();
    }
    if sign <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(log_det)
}

impl Objective for SoftmaxModel {
    fn dim(&self) -> usize {
        self.n()
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        check_point(x, self.n())?;
        lu_log_det(&self.system(x).lu())
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `[(L - I) M⁻¹]_ii` with `M = diag(x)(L - I) + I`.
    fn analytic_partial(&self, x: &[f64], i: usize) -> Option<Result<f64>> {
        let lu = self.system(x).lu();
        Some(lu_log_det(&lu).and_then(|_| {
            let mut e = DVector::zeros(self.n());
            e[i] = 1.0;
            let w = lu.solve(&e).ok_or(Error::NotPositiveDefinite)?;
            Ok(self
                .shifted
                .row(i)
                .iter()
                .zip(w.iter())
                .map(|(a, b)| a * b)
                .sum())
        }))
    }

    fn has_analytic_partial(&self) -> bool {
        true
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(x, self.n())?;
        let (_, inverse) = self.log_det_and_inverse(x)?;
        Ok((0..self.n())
            .map(|i| {
                self.shifted
                    .row(i)
                    .iter()
                    .zip(inverse.column(i).iter())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Along coordinate `i` the system matrix is a rank-one update of the
    /// `x_i = 0` matrix, so `F(z) = F_0 + ln(1 + b z)` with
    /// `b = (L - I)_{i,:} M_0⁻¹ e_i`.
    fn restrict<'a>(&'a self, x: &[f64], i: usize) -> Result<Box<dyn Slice + 'a>> {
        check_point(x, self.n())?;
        check_index(i, self.n())?;
        let mut base = x.to_vec();
        base[i] = 0.0;
        let lu = self.system(&base).lu();
        let log_det = lu_log_det(&lu)?;
        let mut e = DVector::zeros(self.n());
        e[i] = 1.0;
        let w = lu.solve(&e).ok_or(Error::NotPositiveDefinite)?;
        let coupling = self
            .shifted
            .row(i)
            .iter()
            .zip(w.iter())
            .map(|(a, b)| a * b)
            .sum();
        Ok(Box::new(SoftmaxSlice { log_det, coupling }))
    }
}

struct SoftmaxSlice {
    log_det: f64,
    coupling: f64,
}

impl SoftmaxSlice {
    fn factor(&self, z: f64) -> Result<f64> {
        let factor = 1.0 + self.coupling * z;
        if factor > 0.0 {
            Ok(factor)
        } else {
            Err(Error::NotPositiveDefinite)
        }
    }
}

impl Slice for SoftmaxSlice {
    fn value(&self, z: f64) -> Result<f64> {
        Ok(self.log_det + self.factor(z)?.ln())
    }

    fn derivative(&self, z: f64) -> Result<f64> {
        Ok(self.coupling / self.factor(z)?)
    }
}
