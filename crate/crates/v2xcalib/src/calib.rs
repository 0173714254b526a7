//! Trial-vs-simulation comparison and channel-parameter calibration.
//!
//! Comparison is trend-based: per-condition medians, relative deviations, a
//! pooled scale factor, and Spearman rank correlation (absolute values of
//! trial and simulated metrics are not directly comparable; their ordering
//! across conditions is). Calibration grid-searches the path-loss exponent
//! and fading parameters to minimize the summed squared median divergence
//! against trial throughput.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, DeviceKind, FadingKind, McsId, ScenarioConfig};
use crate::io::fmt_sig9;
use crate::sim::{self, SimError};
use crate::stats::{median, spearman_rho, StatsError};

#[derive(Debug, Error)]
pub enum CalibError {
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("need at least {needed} shared conditions, got {got}")]
    TooFewConditions { needed: usize, got: usize },
    #[error("bad condition key `{0}` (expected device:mcs:distance)")]
    BadConditionKey(String),
    #[error("calibration grid is empty")]
    EmptyGrid,
    #[error("every grid point failed to simulate")]
    AllPointsFailed,
}

/// One (device, MCS, distance) experimental condition.
///
/// The canonical string form `HP:qam64_34:110` keys trial data, sweep
/// outputs, and reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionKey {
    pub device: DeviceKind,
    pub mcs: McsId,
    pub distance_m: f64,
}

impl fmt::Display for ConditionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.device.token(), self.mcs.token(), fmt_sig9(self.distance_m))
    }
}

impl FromStr for ConditionKey {
    type Err = CalibError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CalibError::BadConditionKey(s.to_string());
        let mut parts = s.split(':');
        let device = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let mcs = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let distance_m: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if parts.next().is_some() || !(distance_m > 0.0) {
            return Err(bad());
        }
        Ok(ConditionKey { device, mcs, distance_m })
    }
}

/// Median pair and deviations for one shared condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendPair {
    pub condition: String,
    pub sim_median: f64,
    pub trial_median: f64,
    /// `|sim − trial| / trial`.
    pub relative_deviation: f64,
    /// Deviation after multiplying the sim median by the pooled scale factor.
    pub scaled_deviation: f64,
}

/// Trend-based comparison of simulated and trial sample populations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub pairs: Vec<TrendPair>,
    /// Spearman rank correlation of the per-condition median vectors.
    pub rank_correlation: f64,
    /// `median(pooled trial) / median(pooled sim)`.
    pub scale_factor: f64,
    /// Conditions present only on the simulation side.
    pub uncovered_sim: Vec<String>,
    /// Conditions present only on the trial side.
    pub uncovered_trial: Vec<String>,
}

/// Compares two condition→samples maps over their shared conditions
/// (at least three are required for a meaningful rank correlation).
pub fn trend_compare(
    sim: &BTreeMap<String, Vec<f64>>,
    trial: &BTreeMap<String, Vec<f64>>,
) -> Result<TrendReport, CalibError> {
    let shared: Vec<&String> = sim.keys().filter(|k| trial.contains_key(*k)).collect();
    if shared.len() < 3 {
        return Err(CalibError::TooFewConditions { needed: 3, got: shared.len() });
    }

    let pooled_sim: Vec<f64> = shared.iter().flat_map(|k| sim[*k].iter().copied()).collect();
    let pooled_trial: Vec<f64> = shared.iter().flat_map(|k| trial[*k].iter().copied()).collect();
    let scale_factor = median(&pooled_trial)? / median(&pooled_sim)?;

    let mut pairs = Vec::with_capacity(shared.len());
    let mut sim_medians = Vec::with_capacity(shared.len());
    let mut trial_medians = Vec::with_capacity(shared.len());
    for key in &shared {
        let sim_median = median(&sim[*key])?;
        let trial_median = median(&trial[*key])?;
        sim_medians.push(sim_median);
        trial_medians.push(trial_median);
        pairs.push(TrendPair {
            condition: (*key).clone(),
            sim_median,
            trial_median,
            relative_deviation: (sim_median - trial_median).abs() / trial_median,
            scaled_deviation: (sim_median * scale_factor - trial_median).abs() / trial_median,
        });
    }

    Ok(TrendReport {
        rank_correlation: spearman_rho(&sim_medians, &trial_medians)?,
        scale_factor,
        uncovered_sim: sim.keys().filter(|k| !trial.contains_key(*k)).cloned().collect(),
        uncovered_trial: trial.keys().filter(|k| !sim.contains_key(*k)).cloned().collect(),
        pairs,
    })
}

/// Channel parameter grid for calibration.
#[derive(Debug, Clone)]
pub struct CalibrationGrid {
    pub alphas: Vec<f64>,
    pub fadings: Vec<FadingKind>,
}

/// Score of one evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub alpha: f64,
    pub fading: FadingKind,
    /// Sum over conditions of squared median throughput differences;
    /// infinite when the point failed to simulate.
    pub divergence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Grid-search result: the argmin and the full score surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub best_alpha: f64,
    pub best_fading: FadingKind,
    pub divergence: f64,
    pub grid: Vec<GridPoint>,
}

/// Calibrates the channel against trial throughput medians.
///
/// `trial` maps condition keys (`device:mcs:distance`) to throughput sample
/// pools. For every `(α, fading)` grid point the base scenario is re-run per
/// condition and seed (single-segment channel: the grid point replaces the
/// primary segment and clears any breakpoint), pooled per-second throughput
/// samples are reduced to medians, and the summed squared divergence is
/// scored. Ties break toward smaller α, then smaller K.
pub fn calibrate(
    trial: &BTreeMap<String, Vec<f64>>,
    base: &ScenarioConfig,
    grid: &CalibrationGrid,
    seeds: &[u64],
    jobs: Option<usize>,
) -> Result<CalibrationResult, CalibError> {
    if grid.alphas.is_empty() || grid.fadings.is_empty() {
        return Err(CalibError::EmptyGrid);
    }
    base.validate()?;
    let mut conditions: Vec<(ConditionKey, f64)> = Vec::new();
    for (key, samples) in trial {
        conditions.push((key.parse()?, median(samples)?));
    }
    if conditions.is_empty() {
        return Err(CalibError::TooFewConditions { needed: 1, got: 0 });
    }

    let mut points: Vec<(f64, FadingKind)> = Vec::new();
    let mut alphas = grid.alphas.clone();
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut fadings = grid.fadings.clone();
    fadings.sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
    for &a in &alphas {
        for &f in &fadings {
            points.push((a, f));
        }
    }

    let scored: Vec<GridPoint> = sim::with_jobs(jobs, || {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|&(alpha, fading)| match score_point(base, &conditions, alpha, fading, seeds) {
                Ok(divergence) => GridPoint { alpha, fading, divergence, error: None },
                Err(e) => GridPoint {
                    alpha,
                    fading,
                    divergence: f64::INFINITY,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    });

    // Grid order is (alpha asc, fading asc), so keeping the first strict
    // minimum realizes the smaller-alpha-then-smaller-K tie-break.
    let best = scored
        .iter()
        .filter(|p| p.divergence.is_finite())
        .min_by(|a, b| a.divergence.partial_cmp(&b.divergence).unwrap())
        .ok_or(CalibError::AllPointsFailed)?
        .clone();

    Ok(CalibrationResult {
        best_alpha: best.alpha,
        best_fading: best.fading,
        divergence: best.divergence,
        grid: scored,
    })
}

fn score_point(
    base: &ScenarioConfig,
    conditions: &[(ConditionKey, f64)],
    alpha: f64,
    fading: FadingKind,
    seeds: &[u64],
) -> Result<f64, CalibError> {
    let mut divergence = 0.0;
    for (cond, trial_median) in conditions {
        let mut samples = Vec::new();
        for &seed in seeds {
            let mut sc = base.clone();
            sc.distance_m = cond.distance_m;
            sc.mcs = cond.mcs;
            sc.tx_device = cond.device.profile();
            sc.rx_device = cond.device.profile();
            sc.seed = seed;
            sc.channel.path_loss_exponent = alpha;
            sc.channel.fading = fading;
            sc.channel.breakpoint_m = None;
            sc.channel.second_segment = None;
            samples.extend(sim::run(&sc)?.throughput_samples_bps);
        }
        let sim_median = median(&samples)?;
        divergence += (sim_median - trial_median) * (sim_median - trial_median);
    }
    Ok(divergence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ChannelConfig, ScenarioConfig};
    use crate::rng::SimRng;

    fn map_of(entries: &[(&str, Vec<f64>)]) -> BTreeMap<String, Vec<f64>> {
        entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn identical_populations_compare_perfectly() {
        let sim = map_of(&[
            ("HP:bpsk12:50", vec![1.0, 2.0, 3.0]),
            ("HP:qpsk12:50", vec![4.0, 5.0, 6.0]),
            ("HP:qam16_12:50", vec![7.0, 8.0, 9.0]),
        ]);
        let report = trend_compare(&sim, &sim).unwrap();
        assert!((report.rank_correlation - 1.0).abs() < 1e-12);
        assert_eq!(report.scale_factor, 1.0);
        for p in &report.pairs {
            assert_eq!(p.relative_deviation, 0.0);
            assert_eq!(p.scaled_deviation, 0.0);
        }
        assert!(report.uncovered_sim.is_empty());
        assert!(report.uncovered_trial.is_empty());
    }

    #[test]
    fn constant_scaling_is_recovered() {
        // The jitter comparison scale from the initial calibration.
        let scale = 56000.0;
        let sim = map_of(&[
            ("HP:bpsk12:50", vec![3.0e-6, 4.0e-6, 5.0e-6]),
            ("HP:qpsk12:50", vec![2.0e-6, 2.5e-6, 3.0e-6]),
            ("HP:qam64_34:50", vec![1.0e-6, 1.25e-6, 1.5e-6]),
        ]);
        let trial: BTreeMap<String, Vec<f64>> = sim
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|x| x * scale).collect()))
            .collect();
        let report = trend_compare(&sim, &trial).unwrap();
        assert!((report.rank_correlation - 1.0).abs() < 1e-12);
        assert!((report.scale_factor - scale).abs() / scale < 1e-12);
        for p in &report.pairs {
            assert!(p.scaled_deviation < 1e-12, "scaled deviation {}", p.scaled_deviation);
        }
    }

    #[test]
    fn opposite_trends_give_minus_one() {
        let sim = map_of(&[
            ("HP:bpsk12:50", vec![1.0]),
            ("HP:qpsk12:50", vec![2.0]),
            ("HP:qam16_12:50", vec![3.0]),
        ]);
        let trial = map_of(&[
            ("HP:bpsk12:50", vec![9.0]),
            ("HP:qpsk12:50", vec![6.0]),
            ("HP:qam16_12:50", vec![3.0]),
        ]);
        let report = trend_compare(&sim, &trial).unwrap();
        assert!((report.rank_correlation + 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_shared_conditions_is_an_error() {
        let sim = map_of(&[("HP:bpsk12:50", vec![1.0]), ("HP:qpsk12:50", vec![2.0])]);
        let trial = map_of(&[("HP:bpsk12:50", vec![1.0]), ("LP:bpsk12:50", vec![2.0])]);
        assert!(matches!(
            trend_compare(&sim, &trial),
            Err(CalibError::TooFewConditions { needed: 3, got: 1 })
        ));
    }

    #[test]
    fn disjoint_conditions_are_listed_not_compared() {
        let sim = map_of(&[
            ("HP:bpsk12:50", vec![1.0]),
            ("HP:qpsk12:50", vec![2.0]),
            ("HP:qam16_12:50", vec![3.0]),
            ("HP:qam64_34:50", vec![4.0]),
        ]);
        let mut trial = sim.clone();
        trial.remove("HP:qam64_34:50");
        trial.insert("LP:bpsk12:50".into(), vec![9.9]);
        let report = trend_compare(&sim, &trial).unwrap();
        assert_eq!(report.pairs.len(), 3);
        assert_eq!(report.uncovered_sim, vec!["HP:qam64_34:50".to_string()]);
        assert_eq!(report.uncovered_trial, vec!["LP:bpsk12:50".to_string()]);
    }

    #[test]
    fn rank_correlation_survives_monotone_transforms() {
        // 100 randomized cases: rho is invariant under any strictly
        // increasing transform of either median vector.
        let mut rng = SimRng::from_seed(20);
        for case in 0..100 {
            let n = 3 + (rng.next_u64() % 6) as usize;
            // One strictly increasing transform per case:
            // x -> a*exp(b*x) + a*x + c with a, b > 0.
            let a = 0.5 + rng.uniform_f64();
            let b = 0.1 + rng.uniform_f64();
            let c = rng.normal(0.0, 1.0);
            let mut sim = BTreeMap::new();
            let mut trial = BTreeMap::new();
            for i in 0..n {
                let v = rng.normal(0.0, 2.0);
                let base = vec![v, v + 0.1, v - 0.1];
                let transformed: Vec<f64> =
                    base.iter().map(|&x| a * (b * x).exp() + a * x + c).collect();
                sim.insert(format!("HP:bpsk12:{}", i + 1), base);
                trial.insert(format!("HP:bpsk12:{}", i + 1), transformed);
            }
            let report = trend_compare(&sim, &trial).unwrap();
            assert!(
                (report.rank_correlation - 1.0).abs() < 1e-9,
                "case {case}: rho {}",
                report.rank_correlation
            );
        }
    }

    #[test]
    fn condition_keys_round_trip() {
        let key = ConditionKey { device: DeviceKind::Hp, mcs: McsId::Qam64ThreeQuarters, distance_m: 110.0 };
        let s = key.to_string();
        assert_eq!(s, "HP:qam64_34:110");
        let parsed: ConditionKey = s.parse().unwrap();
        assert_eq!(parsed, key);
        assert!("HP:qam64_34".parse::<ConditionKey>().is_err());
        assert!("XX:qam64_34:110".parse::<ConditionKey>().is_err());
        assert!("HP:qam64_34:-5".parse::<ConditionKey>().is_err());
    }

    fn calib_base() -> ScenarioConfig {
        let mut sc = ScenarioConfig::new(
            900.0,
            DeviceKind::Hp,
            McsId::Qam64ThreeQuarters,
            ChannelConfig::simple(2.3, FadingKind::Rician { k_db: 3.36 }),
        );
        sc.duration_s = 2.0;
        // Saturating load: retries cost airtime, so throughput responds to
        // the channel parameters instead of being absorbed by the MAC.
        sc.traffic.send_interval_s = 0.004;
        sc
    }

    #[test]
    fn single_grid_point_is_returned_regardless_of_score() {
        let base = calib_base();
        let trial = map_of(&[("HP:qam64_34:900", vec![1e6, 2e6, 3e6])]);
        let grid = CalibrationGrid {
            alphas: vec![2.5],
            fadings: vec![FadingKind::Rician { k_db: 7.0 }],
        };
        let result = calibrate(&trial, &base, &grid, &[1], None).unwrap();
        assert_eq!(result.best_alpha, 2.5);
        assert_eq!(result.best_fading, FadingKind::Rician { k_db: 7.0 });
        assert_eq!(result.grid.len(), 1);
    }

    #[test]
    fn self_consistent_trial_data_is_recovered_exactly() {
        // Trial data produced by the simulator itself at (2.3, 3.36 dB) with
        // the same seeds gives zero divergence at the true grid point.
        let base = calib_base();
        let seeds = [5, 6];
        let mut trial = BTreeMap::new();
        for &d in &[700.0, 900.0] {
            let mut samples = Vec::new();
            for &seed in &seeds {
                let mut sc = base.clone();
                sc.distance_m = d;
                sc.seed = seed;
                samples.extend(sim::run(&sc).unwrap().throughput_samples_bps);
            }
            trial.insert(format!("HP:qam64_34:{}", fmt_sig9(d)), samples);
        }
        let grid = CalibrationGrid {
            alphas: vec![2.2, 2.3, 2.4],
            fadings: vec![
                FadingKind::Rician { k_db: 2.36 },
                FadingKind::Rician { k_db: 3.36 },
                FadingKind::Rician { k_db: 4.36 },
            ],
        };
        let result = calibrate(&trial, &base, &grid, &seeds, None).unwrap();
        assert_eq!(result.best_alpha, 2.3);
        assert_eq!(result.best_fading, FadingKind::Rician { k_db: 3.36 });
        assert_eq!(result.divergence, 0.0);
        assert_eq!(result.grid.len(), 9);
    }

    #[test]
    fn failed_points_score_infinite_and_are_reported() {
        let mut base = calib_base();
        base.duration_s = 0.5;
        let trial = map_of(&[("HP:qam64_34:900", vec![1e6])]);
        let grid = CalibrationGrid {
            // Negative alpha makes the scenario invalid at simulation time.
            alphas: vec![-1.0, 2.3],
            fadings: vec![FadingKind::Rician { k_db: 3.36 }],
        };
        let result = calibrate(&trial, &base, &grid, &[1], None).unwrap();
        assert_eq!(result.best_alpha, 2.3);
        let failed: Vec<&GridPoint> = result.grid.iter().filter(|p| p.error.is_some()).collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].divergence.is_infinite());
    }
}
