//! Descriptive statistics used by the analysis harness: boxplot summaries
//! with the ±2.7σ outlier rule, quartiles by linear interpolation between
//! closest ranks, the RFC 1889 inter-arrival jitter estimator, and Spearman
//! rank correlation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empty sample set")]
    Empty,
    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("non-finite sample encountered")]
    NonFinite,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Five-number summary plus the outlier bookkeeping used for trial/sim plots.
///
/// Outliers are samples farther than 2.7 sample standard deviations from the
/// sample mean (99.3% coverage under normality); whiskers are the min/max of
/// the remaining samples. This intentionally differs from Tukey IQR fences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
    pub mean: f64,
    pub sigma: f64,
    pub n: usize,
}

/// Quantile of a sorted slice by linear interpolation between closest ranks
/// (the `h = (n-1)p` convention).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Median of an unsorted sample.
pub fn median(samples: &[f64]) -> Result<f64, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::Empty);
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(quantile_sorted(&sorted, 0.5))
}

/// Boxplot summary of a sample (n ≥ 1).
pub fn boxplot(samples: &[f64]) -> Result<BoxplotSummary, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::Empty);
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let n = samples.len();
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mean = sorted.iter().sum::<f64>() / n as f64;
    let sigma = if n > 1 {
        (sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };

    let limit = 2.7 * sigma;
    let (kept, outliers): (Vec<f64>, Vec<f64>) =
        sorted.iter().partition(|&&x| (x - mean).abs() <= limit);
    // Chebyshev bounds the outlier mass well below 1, so `kept` is never empty.
    debug_assert!(!kept.is_empty());

    Ok(BoxplotSummary {
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
        whisker_low: kept[0],
        whisker_high: kept[kept.len() - 1],
        outliers,
        mean,
        sigma,
        n,
    })
}

/// RFC 1889 inter-arrival jitter series over `(send_time, recv_time)` pairs
/// ordered by receive time.
///
/// `D(i-1,i) = (R_i − R_{i-1}) − (S_i − S_{i-1})`, `J_0 = 0`,
/// `J_i = J_{i-1} + (|D| − J_{i-1})/16`. The returned series holds
/// `J_1 … J_{n-1}` (one estimate per packet after the first).
pub fn jitter_rfc1889(records: &[(f64, f64)]) -> Result<Vec<f64>, StatsError> {
    if records.len() < 2 {
        return Err(StatsError::TooFew { needed: 2, got: records.len() });
    }
    let mut series = Vec::with_capacity(records.len() - 1);
    let mut j = 0.0;
    for w in records.windows(2) {
        let (s0, r0) = w[0];
        let (s1, r1) = w[1];
        let d = (r1 - r0) - (s1 - s0);
        j += (d.abs() - j) / 16.0;
        series.push(j);
    }
    Ok(series)
}

/// Spearman rank correlation of two equal-length vectors, with average ranks
/// for ties. Degenerate inputs (either vector constant): 1 if the rank
/// vectors coincide, 0 otherwise.
pub fn spearman_rho(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(StatsError::TooFew { needed: 2, got: a.len() });
    }
    if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for i in 0..ra.len() {
        let da = ra[i] - mean;
        let db = rb[i] - mean;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Ok(if ra == rb { 1.0 } else { 0.0 });
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        // 1-based ranks; ties share the average rank of their run.
        let avg = (i + j + 2) as f64 / 2.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SimRng;

    #[test]
    fn boxplot_constant_data() {
        let b = boxplot(&[5.0, 5.0, 5.0, 5.0]).unwrap();
        assert_eq!(b.q1, 5.0);
        assert_eq!(b.median, 5.0);
        assert_eq!(b.q3, 5.0);
        assert_eq!(b.sigma, 0.0);
        assert!(b.outliers.is_empty());
        assert_eq!(b.whisker_low, 5.0);
        assert_eq!(b.whisker_high, 5.0);
    }

    #[test]
    fn boxplot_interpolated_quartiles() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        let b = boxplot(&v).unwrap();
        assert!((b.median - 5.5).abs() < 1e-12);
        assert!((b.q1 - 3.25).abs() < 1e-12);
        assert!((b.q3 - 7.75).abs() < 1e-12);
        assert_eq!(b.n, 10);
    }

    #[test]
    fn boxplot_single_sample() {
        let b = boxplot(&[3.0]).unwrap();
        assert_eq!(b.median, 3.0);
        assert_eq!(b.sigma, 0.0);
        assert!(b.outliers.is_empty());
    }

    #[test]
    fn boxplot_rejects_empty_and_nan() {
        assert!(boxplot(&[]).is_err());
        assert!(boxplot(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn outlier_fraction_on_normal_samples() {
        // 2*(1 - Phi(2.7)) = 0.694%
        let mut rng = SimRng::from_seed(12);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 1.0)).collect();
        let b = boxplot(&samples).unwrap();
        let fraction = b.outliers.len() as f64 / n as f64;
        assert!((fraction - 0.0069).abs() < 0.0015, "outlier fraction {fraction}");
    }

    #[test]
    fn boxplot_translation_and_permutation_invariance() {
        let mut rng = SimRng::from_seed(13);
        let mut samples: Vec<f64> = (0..500).map(|_| rng.normal(3.0, 2.0)).collect();
        let base = boxplot(&samples).unwrap();

        // Permutation: reverse and interleave.
        samples.reverse();
        let permuted = boxplot(&samples).unwrap();
        assert_eq!(base, permuted);

        // Translation by c shifts location stats by c, keeps outlier count.
        let c = 17.5;
        let shifted: Vec<f64> = samples.iter().map(|x| x + c).collect();
        let sb = boxplot(&shifted).unwrap();
        assert!((sb.median - base.median - c).abs() < 1e-9);
        assert!((sb.q1 - base.q1 - c).abs() < 1e-9);
        assert!((sb.q3 - base.q3 - c).abs() < 1e-9);
        assert!((sb.whisker_low - base.whisker_low - c).abs() < 1e-9);
        assert!((sb.whisker_high - base.whisker_high - c).abs() < 1e-9);
        assert_eq!(sb.outliers.len(), base.outliers.len());
    }

    #[test]
    fn outliers_satisfy_the_sigma_rule() {
        let mut rng = SimRng::from_seed(14);
        let samples: Vec<f64> = (0..2000).map(|_| rng.normal(0.0, 1.0)).collect();
        let b = boxplot(&samples).unwrap();
        for o in &b.outliers {
            assert!((o - b.mean).abs() > 2.7 * b.sigma);
        }
        assert!(b.whisker_low <= b.q1);
        assert!(b.whisker_high >= b.q3);
        assert!(b.q1 <= b.median && b.median <= b.q3);
    }

    #[test]
    fn jitter_constant_transit_is_zero() {
        // Binary-exact times keep D identically zero in float arithmetic.
        let records: Vec<(f64, f64)> = (0..50).map(|i| (i as f64 * 0.25, i as f64 * 0.25 + 0.5)).collect();
        let series = jitter_rfc1889(&records).unwrap();
        assert_eq!(series.len(), 49);
        assert!(series.iter().all(|&j| j == 0.0));
    }

    #[test]
    fn jitter_two_step_example() {
        // D sequence of (1 ms, 1 ms): J = 0.0625 ms then 0.12109375 ms.
        let records = [(0.0, 0.000), (0.010, 0.011), (0.020, 0.022)];
        let series = jitter_rfc1889(&records).unwrap();
        assert_eq!(series.len(), 2);
        assert!((series[0] - 0.0625e-3).abs() < 1e-15, "{}", series[0]);
        assert!((series[1] - 0.12109375e-3).abs() < 1e-15, "{}", series[1]);
    }

    #[test]
    fn jitter_converges_to_constant_deviation() {
        // Constant |D| = c: geometric convergence to c with ratio 15/16.
        let c = 2e-3;
        let mut records = Vec::new();
        let mut r = 0.0;
        for i in 0..400 {
            let s = i as f64 * 0.01;
            r = s + if i % 2 == 0 { 0.0 } else { c };
            records.push((s, r));
        }
        let _ = r;
        let series = jitter_rfc1889(&records).unwrap();
        let last = *series.last().unwrap();
        assert!((last - c).abs() < c * 1e-6, "J converged to {last}");
    }

    #[test]
    fn jitter_offset_invariance() {
        let mut rng = SimRng::from_seed(15);
        let records: Vec<(f64, f64)> = (0..100)
            .map(|i| {
                let s = i as f64 * 0.01;
                (s, s + 0.002 + rng.uniform_f64() * 1e-3)
            })
            .collect();
        let base = jitter_rfc1889(&records).unwrap();
        let send_shift: Vec<(f64, f64)> = records.iter().map(|&(s, r)| (s + 5.0, r)).collect();
        let recv_shift: Vec<(f64, f64)> = records.iter().map(|&(s, r)| (s, r + 5.0)).collect();
        for (a, b) in base.iter().zip(jitter_rfc1889(&send_shift).unwrap()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in base.iter().zip(jitter_rfc1889(&recv_shift).unwrap()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn jitter_needs_two_records() {
        assert!(jitter_rfc1889(&[(0.0, 0.0)]).is_err());
        assert!(jitter_rfc1889(&[]).is_err());
    }

    #[test]
    fn spearman_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let up = [10.0, 20.0, 30.0, 40.0];
        let down = [4.0, 3.0, 2.0, 1.0];
        assert!((spearman_rho(&a, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman_rho(&a, &down).unwrap() + 1.0).abs() < 1e-12);
        // Monotone but non-linear still gives rho = 1.
        let exp: Vec<f64> = a.iter().map(|x| x.exp()).collect();
        assert!((spearman_rho(&a, &exp).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_handles_ties_and_degenerates() {
        let a = [1.0, 2.0, 2.0, 3.0];
        let b = [1.0, 2.0, 2.0, 3.0];
        assert!((spearman_rho(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let constant = [5.0, 5.0, 5.0, 5.0];
        assert_eq!(spearman_rho(&constant, &constant).unwrap(), 1.0);
        assert_eq!(spearman_rho(&constant, &a).unwrap(), 0.0);
        assert!(spearman_rho(&a, &[1.0]).is_err());
    }

    #[test]
    fn spearman_in_range_on_random_input() {
        let mut rng = SimRng::from_seed(16);
        for _ in 0..200 {
            let n = 3 + (rng.next_u64() % 20) as usize;
            let a: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 1.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 1.0)).collect();
            let rho = spearman_rho(&a, &b).unwrap();
            assert!((-1.0..=1.0).contains(&rho), "rho {rho}");
        }
    }
}
