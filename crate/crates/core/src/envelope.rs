//! The planar curve `r(z) = (g(z), h(z))`, its annotated upper concave
//! envelope and the two-point strategy read off where the envelope meets
//! the slope-one line `h' - β = g' - α`.
//!
//! `g` is the abscissa and `h` the ordinate throughout.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid;

/// Base absolute tolerance for geometric comparisons, scaled by
/// `max(1, α, β)`.
pub const GEOM_TOL: f64 = 1e-9;

/// One annotated point `(z, g(z), h(z))` of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub z: f64,
    pub g: f64,
    pub h: f64,
}

impl CurveSample {
    pub fn new(z: f64, g: f64, h: f64) -> Self {
        Self { z, g, h }
    }

    /// `h - g`, the signed offset from the diagonal.
    pub fn diagonal_offset(&self) -> f64 {
        self.h - self.g
    }
}

/// Upper concave envelope of a sampled curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    /// Hull vertices in increasing `g`, each carrying its `z` annotation.
    pub vertices: Vec<CurveSample>,
    /// Positions of the vertices in the input sample list.
    pub indices: Vec<usize>,
    /// `g` at the right end of the curve.
    pub alpha: f64,
    /// `h` at the left end of the curve.
    pub beta: f64,
}

impl Envelope {
    pub fn annotations(&self) -> impl Iterator<Item = f64> + '_ {
        self.vertices.iter().map(|v| v.z)
    }

    pub fn tolerance(&self) -> f64 {
        GEOM_TOL * self.alpha.max(self.beta).max(1.0)
    }

    /// Height of the piecewise-linear envelope at abscissa `g`, or `None`
    /// outside its horizontal extent.
    pub fn height_at(&self, g: f64) -> Option<f64> {
        let first = self.vertices.first()?;
        let last = self.vertices.last()?;
        if g < first.g || g > last.g {
            return None;
        }
        if self.vertices.len() == 1 {
            return Some(first.h);
        }
        let k = self.vertices.windows(2).position(|w| g <= w[1].g)?;
        let (a, b) = (self.vertices[k], self.vertices[k + 1]);
        let t = (g - a.g) / (b.g - a.g);
        Some(a.h + t * (b.h - a.h))
    }
}

/// The decision for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixedStrategy {
    /// Deterministic choice.
    Pure(CurveSample),
    /// `first` with probability `lambda`, else `second`; `first` lies on the
    /// upper side of the diagonal line (`h₁ - g₁ >= h₂ - g₂`).
    TwoPoint {
        first: CurveSample,
        second: CurveSample,
        lambda: f64,
    },
}

impl MixedStrategy {
    pub fn lambda(&self) -> f64 {
        match self {
            MixedStrategy::Pure(_) => 1.0,
            MixedStrategy::TwoPoint { lambda, .. } => *lambda,
        }
    }

    pub fn first(&self) -> CurveSample {
        match self {
            MixedStrategy::Pure(p) => *p,
            MixedStrategy::TwoPoint { first, .. } => *first,
        }
    }

    pub fn second(&self) -> CurveSample {
        match self {
            MixedStrategy::Pure(p) => *p,
            MixedStrategy::TwoPoint { second, .. } => *second,
        }
    }

    /// `λ P₁ + (1 - λ) P₂` as `(g, h)`.
    pub fn expected_point(&self) -> (f64, f64) {
        let (p1, p2, l) = (self.first(), self.second(), self.lambda());
        (l * p1.g + (1.0 - l) * p2.g, l * p1.h + (1.0 - l) * p2.h)
    }

    /// Picks a `z` given a uniform draw `u` in `[0, 1)`.
    pub fn realize(&self, u: f64) -> f64 {
        if u < self.lambda() {
            self.first().z
        } else {
            self.second().z
        }
    }
}

/// Samples `(z, g(z), h(z))` at `lo, lo + eps, …, hi`.
pub fn sample_curve<G, H>(
    mut g: G,
    mut h: H,
    lo: f64,
    hi: f64,
    eps: f64,
) -> Result<Vec<CurveSample>>
where
    G: FnMut(f64) -> Result<f64>,
    H: FnMut(f64) -> Result<f64>,
{
    let ordered = lo < hi && eps > 0.0;
    if !ordered {
        return Err(Error::InvalidArgument(format!(
            "curve sampling needs lo < hi and eps > 0 (lo = {lo}, hi = {hi}, eps = {eps})"
        )));
    }
    grid::points(lo, hi, eps)
        .into_iter()
        .map(|z| {
            let (gz, hz) = (g(z)?, h(z)?);
            if gz.is_finite() && hz.is_finite() {
                Ok(CurveSample::new(z, gz, hz))
            } else {
                Err(Error::NonFinite { z })
            }
        })
        .collect()
}

/// True unless `b` sits more than `tol` (perpendicular distance) above the
/// chord from `a` to `c`, i.e. `b` is not a strict vertex of an upper hull.
fn not_right_turn(a: &CurveSample, b: &CurveSample, c: &CurveSample, tol: f64) -> bool {
    let cross = (b.g - a.g) * (c.h - b.h) - (b.h - a.h) * (c.g - b.g);
    cross >= -tol * (c.g - a.g).hypot(c.h - a.h)
}

/// Annotated upper concave envelope in one stack pass over `z`-ordered
/// samples.
///
/// A sample is admitted only if its `g` strictly exceeds the stack top's;
/// on admission the stack is popped while the slope into the top is not
/// larger than the slope from the top to the new point, so collinear
/// middle points (within [`GEOM_TOL`]) are dropped.
pub fn upper_concave_envelope(samples: &[CurveSample]) -> Result<Envelope> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    let alpha = samples[samples.len() - 1].g.max(0.0);
    let beta = samples[0].h.max(0.0);
    let tol = GEOM_TOL * alpha.max(beta).max(1.0);
    let mut stack: Vec<usize> = Vec::with_capacity(samples.len());
    for (k, s) in samples.iter().enumerate() {
        if let Some(&top) = stack.last() {
            if s.g <= samples[top].g {
                continue;
            }
        }
        while stack.len() >= 2
            && not_right_turn(
                &samples[stack[stack.len() - 2]],
                &samples[stack[stack.len() - 1]],
                s,
                tol,
            )
        {
            stack.pop();
        }
        stack.push(k);
    }
    Ok(Envelope {
        vertices: stack.iter().map(|&k| samples[k]).collect(),
        indices: stack,
        alpha,
        beta,
    })
}

/// Intersects the envelope with `h' - β = g' - α` and expresses the
/// crossing as a mix of the two vertices around it.
pub fn intersect_diagonal(env: &Envelope) -> Result<MixedStrategy> {
    let first = *env.vertices.first().ok_or(Error::TooFewSamples(0))?;
    let last = *env.vertices.last().unwrap_or(&first);
    let tol = env.tolerance();
    if env.alpha <= tol {
        return Ok(MixedStrategy::Pure(first));
    }
    if env.beta <= tol {
        return Ok(MixedStrategy::Pure(last));
    }

    let target = env.beta - env.alpha;
    if let Some(v) = env
        .vertices
        .iter()
        .find(|v| (v.diagonal_offset() - target).abs() <= tol)
    {
        return Ok(MixedStrategy::Pure(*v));
    }
    for w in env.vertices.windows(2) {
        let (d1, d2) = (w[0].diagonal_offset(), w[1].diagonal_offset());
        if d1 > target && target > d2 {
            let lambda = (target - d2) / (d1 - d2);
            return Ok(MixedStrategy::TwoPoint {
                first: w[0],
                second: w[1],
                lambda,
            });
        }
    }
    Err(Error::SingleCrossingViolated { target })
}

#[derive(Serialize)]
struct Dump<'a> {
    samples: &'a [CurveSample],
    envelope: &'a Envelope,
    strategy: &'a MixedStrategy,
}

/// JSON snapshot of one coordinate's geometry, for plotting.
pub fn debug_dump(
    samples: &[CurveSample],
    envelope: &Envelope,
    strategy: &MixedStrategy,
) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Dump {
        samples,
        envelope,
        strategy,
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chord(alpha: f64, beta: f64, k: usize) -> Vec<CurveSample> {
        (0..=k)
            .map(|j| {
                let t = j as f64 / k as f64;
                CurveSample::new(t, alpha * t, beta * (1.0 - t))
            })
            .collect()
    }

    #[test]
    fn sample_curve_grid_rules() {
        let s = sample_curve(Ok, |z| Ok(1.0 - z), 0.0, 1.0, 0.25).unwrap();
        let zs: Vec<f64> = s.iter().map(|c| c.z).collect();
        assert_eq!(zs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(s[0].g, 0.0);
        assert_eq!(s[4].h, 0.0);

        let s = sample_curve(Ok, |z| Ok(1.0 - z), 0.0, 1.0, 0.3).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s[4].z, 1.0);
    }

    #[test]
    fn sample_curve_reports_non_finite_z() {
        let err = sample_curve(|z| Ok(1.0 / (z - 0.5)), |_| Ok(0.0), 0.0, 1.0, 0.25).unwrap_err();
        assert!(matches!(err, Error::NonFinite { z } if z == 0.5));
    }

    #[test]
    fn collinear_samples_collapse_to_endpoints() {
        let env = upper_concave_envelope(&chord(1.0, 1.0, 4)).unwrap();
        assert_eq!(env.indices, vec![0, 4]);
    }

    #[test]
    fn concave_samples_are_all_kept() {
        let s: Vec<CurveSample> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&z| CurveSample::new(z, z, 1.0 - (1.0 - z) * (1.0 - z)))
            .collect();
        let env = upper_concave_envelope(&s).unwrap();
        assert_eq!(env.indices, vec![0, 1, 2]);
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            upper_concave_envelope(&chord(1.0, 1.0, 1)[..1]),
            Err(Error::TooFewSamples(1))
        ));
    }

    #[test]
    fn equal_g_keeps_earlier_sample() {
        let s = vec![
            CurveSample::new(0.0, 0.0, 1.0),
            CurveSample::new(0.1, 0.5, 0.8),
            CurveSample::new(0.2, 0.5, 0.2),
            CurveSample::new(0.3, 1.0, 0.0),
        ];
        let env = upper_concave_envelope(&s).unwrap();
        assert_eq!(env.indices, vec![0, 1, 3]);
        assert_eq!(env.annotations().collect::<Vec<_>>(), vec![0.0, 0.1, 0.3]);
    }

    #[test]
    fn symmetric_chord_mixes_endpoints_evenly() {
        let env = upper_concave_envelope(&chord(1.0, 1.0, 10)).unwrap();
        let s = intersect_diagonal(&env).unwrap();
        let MixedStrategy::TwoPoint {
            first,
            second,
            lambda,
        } = s
        else {
            panic!("expected a two-point strategy, got {s:?}");
        };
        assert_eq!((first.g, first.h), (0.0, 1.0));
        assert_eq!((second.g, second.h), (1.0, 0.0));
        assert!((lambda - 0.5).abs() < 1e-15);
        let (pg, ph) = s.expected_point();
        assert!((pg - 0.5).abs() < 1e-15 && (ph - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_alpha_is_deterministic_at_left_end() {
        let s = vec![
            CurveSample::new(0.2, 0.0, 0.5),
            CurveSample::new(0.3, -0.1, 0.2),
            CurveSample::new(0.4, 0.0, 0.0),
        ];
        let env = upper_concave_envelope(&s).unwrap();
        assert_eq!(intersect_diagonal(&env).unwrap(), MixedStrategy::Pure(s[0]));
    }

    #[test]
    fn vertex_on_the_line_is_pure() {
        let s = vec![
            CurveSample::new(0.0, 0.0, 1.0),
            CurveSample::new(0.5, 0.9, 0.9),
            CurveSample::new(1.0, 1.0, 0.0),
        ];
        let env = upper_concave_envelope(&s).unwrap();
        let strategy = intersect_diagonal(&env).unwrap();
        assert_eq!(strategy, MixedStrategy::Pure(s[1]));
        assert_eq!(strategy.lambda(), 1.0);
    }

    #[test]
    fn crossing_violation_is_diagnosed() {
        // Offsets jump over the target without an envelope edge straddling it
        // because the curve runs the wrong way.
        let env = Envelope {
            vertices: vec![
                CurveSample::new(0.0, 0.0, 0.0),
                CurveSample::new(1.0, 1.0, 2.0),
            ],
            indices: vec![0, 1],
            alpha: 1.0,
            beta: 0.5,
        };
        assert!(matches!(
            intersect_diagonal(&env),
            Err(Error::SingleCrossingViolated { .. })
        ));
    }

    #[test]
    fn height_interpolates() {
        let env = upper_concave_envelope(&chord(2.0, 1.0, 4)).unwrap();
        assert!((env.height_at(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(env.height_at(3.0), None);
    }

    #[test]
    fn dump_is_json() {
        let s = chord(1.0, 1.0, 2);
        let env = upper_concave_envelope(&s).unwrap();
        let strategy = intersect_diagonal(&env).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&debug_dump(&s, &env, &strategy).unwrap()).unwrap();
        assert_eq!(v["strategy"]["kind"], "two_point");
        assert_eq!(v["samples"].as_array().unwrap().len(), 3);
    }
}
