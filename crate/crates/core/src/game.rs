//! The per-coordinate zero-sum game behind the randomized bi-greedy.
//!
//! ALG picks a point `(ĝ, ĥ)` of the curve, ADV picks `(g*, h*)`, and ALG
//! is paid `½ĝ + ½ĥ - max(g* - ĝ, h* - ĥ)`. Against a two-point mix the
//! ADV points with non-negative expected payoff form a pentagon with
//! corners `M0, M1, Q1, Q2, M2`. These functions are diagnostics used to
//! check the strategy built by [`crate::envelope::intersect_diagonal`].

use serde::Serialize;

use crate::envelope::{CurveSample, MixedStrategy};

/// Tolerance of [`point_in_region`].
pub const REGION_TOL: f64 = 1e-9;

/// A point in the `(g, h)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub g: f64,
    pub h: f64,
}

impl Point {
    pub fn new(g: f64, h: f64) -> Self {
        Self { g, h }
    }
}

impl From<CurveSample> for Point {
    fn from(s: CurveSample) -> Self {
        Self { g: s.g, h: s.h }
    }
}

/// ALG's payoff when it plays `(g_hat, h_hat)` and ADV plays `(g_star, h_star)`.
pub fn game_utility(g_hat: f64, h_hat: f64, g_star: f64, h_star: f64) -> f64 {
    0.5 * g_hat + 0.5 * h_hat - (g_star - g_hat).max(h_star - h_hat)
}

/// Non-negative-payoff region for ADV against a two-point mix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pentagon {
    pub m0: Point,
    pub m1: Point,
    pub m2: Point,
    pub q1: Point,
    pub q2: Point,
    /// Weight on the slant edge `λ g + (1 - λ) h <= slant_bound`.
    #[serde(skip)]
    slant_weight: f64,
    #[serde(skip)]
    slant_bound: f64,
}

impl Pentagon {
    /// Vertices in counter-clockwise order starting at `M0`.
    pub fn vertices(&self) -> [Point; 5] {
        [self.m0, self.m2, self.q2, self.q1, self.m1]
    }
}

/// Builds the pentagon for ADV against "`p1` with probability `lambda`,
/// else `p2`". The pair is swapped (with `lambda ↦ 1 - lambda`) when
/// `h1 - g1 < h2 - g2`.
pub fn positive_region(p1: Point, p2: Point, lambda: f64) -> Pentagon {
    let (p1, p2, lambda) = if p1.h - p1.g >= p2.h - p2.g {
        (p1, p2, lambda)
    } else {
        (p2, p1, 1.0 - lambda)
    };
    let mix = |a: f64, b: f64| lambda * a + (1.0 - lambda) * b;
    let top = mix(1.5 * p1.h + 0.5 * p1.g, 1.5 * p2.h + 0.5 * p2.g);
    let right = mix(1.5 * p1.g + 0.5 * p1.h, 1.5 * p2.g + 0.5 * p2.h);
    let m1 = Point::new(-1.0, top);
    let m2 = Point::new(right, -1.0);
    let q1 = Point::new(top - (p1.h - p1.g), top);
    let q2 = Point::new(right, right + (p2.h - p2.g));
    Pentagon {
        m0: Point::new(-1.0, -1.0),
        m1,
        m2,
        q1,
        q2,
        slant_weight: lambda,
        slant_bound: mix(1.5 * p1.g + 0.5 * p1.h, 0.5 * p2.g + 1.5 * p2.h),
    }
}

/// The pentagon of a strategy returned by the envelope step.
pub fn strategy_region(strategy: &MixedStrategy) -> Pentagon {
    positive_region(
        strategy.first().into(),
        strategy.second().into(),
        strategy.lambda(),
    )
}

/// Whether `p` lies in the pentagon, up to [`REGION_TOL`].
pub fn point_in_region(pentagon: &Pentagon, p: Point) -> bool {
    let w = pentagon.slant_weight;
    p.g >= -1.0 - REGION_TOL
        && p.h >= -1.0 - REGION_TOL
        && p.h <= pentagon.m1.h + REGION_TOL
        && p.g <= pentagon.m2.g + REGION_TOL
        && w * p.g + (1.0 - w) * p.h <= pentagon.slant_bound + REGION_TOL
}

/// Expected payoff of `strategy` against `adv`.
pub fn expected_utility(strategy: &MixedStrategy, adv: Point) -> f64 {
    let (a, b, lambda) = (strategy.first(), strategy.second(), strategy.lambda());
    let first = game_utility(a.g, a.h, adv.g, adv.h);
    if lambda == 1.0 {
        return first;
    }
    lambda * first + (1.0 - lambda) * game_utility(b.g, b.h, adv.g, adv.h)
}

/// Smallest expected payoff of `strategy` over ADV's choices from `curve`.
/// `+∞` for an empty curve.
pub fn expected_utility_min(strategy: &MixedStrategy, curve: &[CurveSample]) -> f64 {
    curve
        .iter()
        .map(|s| expected_utility(strategy, Point::from(*s)))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{intersect_diagonal, sample_curve, upper_concave_envelope};

    fn close(a: Point, b: Point) -> bool {
        (a.g - b.g).abs() < 1e-12 && (a.h - b.h).abs() < 1e-12
    }

    #[test]
    fn utility_examples() {
        assert!((game_utility(0.3, 0.5, 0.6, 0.2) - 0.1).abs() < 1e-15);
        assert!((game_utility(0.4, 0.8, 0.4, 0.8) - 0.6).abs() < 1e-15);
        assert_eq!(game_utility(0.0, 0.0, 1.0, 1.0), -1.0);
    }

    #[test]
    fn symmetric_pentagon() {
        let p = positive_region(Point::new(0.0, 1.0), Point::new(1.0, 0.0), 0.5);
        assert!(close(p.m1, Point::new(-1.0, 1.0)));
        assert!(close(p.m2, Point::new(1.0, -1.0)));
        assert!(close(p.q1, Point::new(0.0, 1.0)));
        assert!(close(p.q2, Point::new(1.0, 0.0)));
        assert!(point_in_region(&p, p.m0));
        assert!(!point_in_region(&p, Point::new(2.0, 2.0)));
        // Swapped input gives the same region.
        let q = positive_region(Point::new(1.0, 0.0), Point::new(0.0, 1.0), 0.5);
        assert_eq!(p, q);
    }

    #[test]
    fn single_point_pentagon() {
        let (g, h) = (0.3, 0.7);
        for lambda in [0.0, 0.4, 1.0] {
            let p = positive_region(Point::new(g, h), Point::new(g, h), lambda);
            assert!((p.m1.h - (1.5 * h + 0.5 * g)).abs() < 1e-15);
            assert!((p.m2.g - (1.5 * g + 0.5 * h)).abs() < 1e-15);
        }
    }

    #[test]
    fn lambda_one_ignores_second_point() {
        let a = positive_region(Point::new(0.2, 0.9), Point::new(0.8, 0.1), 1.0);
        let b = positive_region(Point::new(0.2, 0.9), Point::new(0.5, -0.3), 1.0);
        assert!(close(a.m1, b.m1) && close(a.m2, b.m2) && close(a.q1, b.q1));
    }

    #[test]
    fn slant_edges_have_unit_slope_and_corners_are_on_boundary() {
        let (p1, p2) = (Point::new(0.1, 0.9), Point::new(0.7, 0.2));
        let pent = positive_region(p1, p2, 0.3);
        assert!(((pent.q1.h - p1.h) - (pent.q1.g - p1.g)).abs() < 1e-9);
        assert!(((pent.q2.h - p2.h) - (pent.q2.g - p2.g)).abs() < 1e-9);
        let mix = MixedStrategy::TwoPoint {
            first: CurveSample::new(0.0, p1.g, p1.h),
            second: CurveSample::new(1.0, p2.g, p2.h),
            lambda: 0.3,
        };
        for corner in [pent.m1, pent.q1, pent.q2, pent.m2] {
            assert!(point_in_region(&pent, corner));
            if corner.g > -1.0 && corner.h > -1.0 {
                assert!(expected_utility(&mix, corner).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chord_strategy_is_never_beaten() {
        let curve = sample_curve(Ok, |z| Ok(1.0 - z), 0.0, 1.0, 0.1).unwrap();
        let strategy = intersect_diagonal(&upper_concave_envelope(&curve).unwrap()).unwrap();
        assert!(expected_utility_min(&strategy, &curve) >= -1e-9);
        let region = strategy_region(&strategy);
        assert!(curve.iter().all(|s| point_in_region(&region, (*s).into())));
    }

    #[test]
    fn copy_case_pays_half_the_sum() {
        let s = CurveSample::new(0.5, 0.2, 0.6);
        let v = expected_utility_min(&MixedStrategy::Pure(s), &[s]);
        assert!((v - 0.4).abs() < 1e-15);
    }

    #[test]
    fn minimum_matches_double_loop() {
        let curve: Vec<CurveSample> = (0..=20)
            .map(|k| {
                let z = k as f64 / 20.0;
                CurveSample::new(z, z.sqrt() * 0.8 - 0.1, 0.7 - z * z)
            })
            .collect();
        let strategy = MixedStrategy::TwoPoint {
            first: curve[3],
            second: curve[15],
            lambda: 0.35,
        };
        let mut direct = f64::INFINITY;
        for s in &curve {
            let mut v = 0.0;
            for (w, p) in [(0.35, curve[3]), (0.65, curve[15])] {
                v += w * (0.5 * p.g + 0.5 * p.h - f64::max(s.g - p.g, s.h - p.h));
            }
            direct = direct.min(v);
        }
        assert!((expected_utility_min(&strategy, &curve) - direct).abs() < 1e-14);
        assert_eq!(expected_utility_min(&strategy, &[]), f64::INFINITY);
    }
}
