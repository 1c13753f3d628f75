use crate::error::{QError, Result};

/// Partial sum of a series together with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TailSum {
    pub sum: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Number of trailing term ratios that must all sit below one before the
/// geometric tail bound is trusted.
const RATIO_WINDOW: usize = 3;

/// Sums `term(0), term(1), ...` until the geometric tail bound
/// `|t_j| rho / (1 - rho)`, with `rho` the largest of the last few ratios
/// `|t_{i+1} / t_i|`, drops below `target`.
///
/// At least `min_terms` terms are always summed. Fails with
/// [`QError::TailNotBounded`] if `cap` terms do not certify the target.
pub(crate) fn certified_sum<F>(mut term: F, min_terms: usize, cap: usize, target: f64) -> Result<TailSum>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut sum = 0.0;
    let mut recent = [0.0f64; RATIO_WINDOW + 1];
    let mut bound = f64::INFINITY;
    for j in 0..cap {
        let t = term(j)?;
        if !t.is_finite() {
            return Err(QError::TailNotBounded { bound: f64::INFINITY, terms: j + 1 });
        }
        sum += t;
        recent.rotate_left(1);
        recent[RATIO_WINDOW] = t.abs();
        if j + 1 < min_terms.max(RATIO_WINDOW + 1) {
            continue;
        }
        if recent.iter().all(|&v| v == 0.0) {
            return Ok(TailSum { sum, tail_bound: 0.0, terms: j + 1 });
        }
        let mut rho: f64 = 0.0;
        for w in recent.windows(2) {
            rho = rho.max(if w[0] == 0.0 { f64::INFINITY } else { w[1] / w[0] });
        }
        if rho < 1.0 {
            bound = recent[RATIO_WINDOW] * rho / (1.0 - rho);
            if bound <= target {
                return Ok(TailSum { sum, tail_bound: bound, terms: j + 1 });
            }
        }
    }
    Err(QError::TailNotBounded { bound, terms: cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_is_certified() {
        let s = certified_sum(|j| Ok(0.5f64.powi(j as i32)), 0, 200, 1e-12).unwrap();
        assert!((s.sum - 2.0).abs() <= 1e-11);
        assert!(s.tail_bound <= 1e-12);
    }

    #[test]
    fn divergent_series_is_rejected() {
        let err = certified_sum(|j| Ok(1.0 + j as f64), 0, 50, 1e-12).unwrap_err();
        assert!(matches!(err, QError::TailNotBounded { terms: 50, .. }));
    }

    #[test]
    fn finite_support_stops_on_zeros() {
        let s = certified_sum(|j| Ok(if j < 3 { 1.0 } else { 0.0 }), 0, 50, 1e-12).unwrap();
        assert_eq!(s.sum, 3.0);
        assert_eq!(s.tail_bound, 0.0);
    }
}
