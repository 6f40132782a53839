use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Objective, QuadraticModel, Slice, SoftmaxModel, Variant};
use crate::error::{Error, Result};

/// Instance family, also the `kind` tag of the instance file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "nqp-strong")]
    NqpStrong,
    #[serde(rename = "nqp-weak")]
    NqpWeak,
    #[serde(rename = "softmax")]
    Softmax,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::NqpStrong => "nqp-strong",
            Family::NqpWeak => "nqp-weak",
            Family::Softmax => "softmax",
        }
    }

    /// The diminishing-returns property instances of this family satisfy.
    pub fn variant(self) -> Variant {
        match self {
            Family::NqpWeak => Variant::Weak,
            Family::NqpStrong | Family::Softmax => Variant::Strong,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nqp-strong" => Ok(Family::NqpStrong),
            "nqp-weak" => Ok(Family::NqpWeak),
            "softmax" => Ok(Family::Softmax),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Quadratic(QuadraticModel),
    Softmax(SoftmaxModel),
}

/// A generated (or loaded) problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub family: Family,
    pub seed: u64,
    pub model: Model,
}

/// On-disk layout: `{kind, n, seed, H?, h?, c?, L?}` with row-major matrices.
#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    kind: Family,
    n: usize,
    seed: u64,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    hessian: Option<Vec<f64>>,
    #[serde(rename = "h", default, skip_serializing_if = "Option::is_none")]
    linear: Option<Vec<f64>>,
    #[serde(rename = "c", default, skip_serializing_if = "Option::is_none")]
    offset: Option<f64>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    kernel: Option<Vec<f64>>,
}

impl Instance {
    pub fn generate(family: Family, n: usize, seed: u64) -> Result<Self> {
        let model = match family {
            Family::NqpStrong => {
                Model::Quadratic(QuadraticModel::generate(n, seed, Variant::Strong)?)
            }
            Family::NqpWeak => Model::Quadratic(QuadraticModel::generate(n, seed, Variant::Weak)?),
            Family::Softmax => Model::Softmax(SoftmaxModel::generate(n, seed)?),
        };
        Ok(Self {
            family,
            seed,
            model,
        })
    }

    fn objective(&self) -> &dyn Objective {
        match &self.model {
            Model::Quadratic(m) => m,
            Model::Softmax(m) => m,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let n = self.dim();
        let file = match &self.model {
            Model::Quadratic(m) => InstanceFile {
                kind: self.family,
                n,
                seed: self.seed,
                hessian: Some(m.hessian().to_vec()),
                linear: Some(m.linear().to_vec()),
                offset: Some(m.offset()),
                kernel: None,
            },
            Model::Softmax(m) => InstanceFile {
                kind: self.family,
                n,
                seed: self.seed,
                hessian: None,
                linear: None,
                offset: None,
                kernel: Some(m.kernel().transpose().as_slice().to_vec()),
            },
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let missing = |field: &str| {
            Error::InvalidArgument(format!("{} instance is missing `{field}`", file.kind))
        };
        let model = match file.kind {
            Family::NqpStrong | Family::NqpWeak => Model::Quadratic(QuadraticModel::new(
                file.n,
                file.hessian.ok_or_else(|| missing("H"))?,
                file.linear.ok_or_else(|| missing("h"))?,
                file.offset.ok_or_else(|| missing("c"))?,
            )?),
            Family::Softmax => {
                let flat = file.kernel.ok_or_else(|| missing("L"))?;
                if flat.len() != file.n * file.n {
                    return Err(Error::DimensionMismatch {
                        expected: file.n * file.n,
                        given: flat.len(),
                    });
                }
                let kernel = DMatrix::from_row_slice(file.n, file.n, &flat);
                Model::Softmax(SoftmaxModel::from_kernel(kernel, None, file.seed)?)
            }
        };
        Ok(Self {
            family: file.kind,
            seed: file.seed,
            model,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl Objective for Instance {
    fn dim(&self) -> usize {
        self.objective().dim()
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        self.objective().eval(x)
    }

    fn lipschitz(&self) -> f64 {
        self.objective().lipschitz()
    }

    fn analytic_partial(&self, x: &[f64], i: usize) -> Option<Result<f64>> {
        self.objective().analytic_partial(x, i)
    }

    fn has_analytic_partial(&self) -> bool {
        self.objective().has_analytic_partial()
    }

    fn partial(&self, x: &[f64], i: usize) -> Result<f64> {
        self.objective().partial(x, i)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.objective().gradient(x)
    }

    fn restrict<'a>(&'a self, x: &[f64], i: usize) -> Result<Box<dyn Slice + 'a>> {
        self.objective().restrict(x, i)
    }
}
