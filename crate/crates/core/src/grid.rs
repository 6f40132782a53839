//! Uniform grids on an interval.

/// Number of `eps` steps needed to cover `span`, `⌈span / eps⌉`, with
/// ratios within 1e-9 of an integer snapped to it so that round-off never
/// adds a sliver step next to the endpoint.
pub fn step_count(span: f64, eps: f64) -> usize {
    let ratio = span / eps;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}

/// `lo, lo + eps, lo + 2 eps, …` followed by `hi`, which is always the last
/// point.
pub fn points(lo: f64, hi: f64, eps: f64) -> Vec<f64> {
    let steps = step_count(hi - lo, eps);
    let mut out: Vec<f64> = (0..steps).map(|k| lo + k as f64 * eps).collect();
    out.push(hi);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_and_ragged_grids() {
        assert_eq!(points(0.0, 1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let ragged = points(0.0, 1.0, 0.3);
        assert_eq!(ragged.len(), 5);
        assert!((ragged[3] - 0.9).abs() < 1e-15);
        assert_eq!(ragged[4], 1.0);
    }

    #[test]
    fn round_off_does_not_add_a_sliver() {
        assert_eq!(points(0.0, 1.0, 0.01).len(), 101);
        assert_eq!(points(0.3, 0.6, 0.1).len(), 4);
        assert_eq!(points(0.0, 1.0, 1.0 / 64.0).len(), 65);
    }

    #[test]
    fn degenerate_interval_is_one_point() {
        assert_eq!(points(0.4, 0.4, 0.1), vec![0.4]);
    }
}
