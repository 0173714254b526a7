//! Acceptance suite: one test per criterion, each printing a PASS or FAIL
//! line. Run with:
//!
//! ```text
//! cargo test --release --test acceptance -- --nocapture --test-threads=1
//! ```

use std::collections::BTreeMap;
use std::sync::OnceLock;

use v2xcalib::calib::{calibrate, trend_compare, CalibrationGrid};
use v2xcalib::config::{
    builtin_mcs_table, device_profiles, scenario_presets, ChannelConfig, DeviceKind, FadingKind,
    McsId, ScenarioConfig,
};
use v2xcalib::io::fmt_sig9;
use v2xcalib::mac::MacTimingConstants;
use v2xcalib::phy::{mos_dbm, scale_tx_energy_for_bandwidth, PhyTimingConstants};
use v2xcalib::rng::SimRng;
use v2xcalib::sim::{self, RunMetrics};
use v2xcalib::stats::{boxplot, jitter_rfc1889, median};

fn criterion(id: u32, name: &str, f: impl FnOnce() -> Result<(), String>) {
    match f() {
        Ok(()) => println!("criterion {id:2} ({name}): PASS"),
        Err(msg) => {
            println!("criterion {id:2} ({name}): FAIL - {msg}");
            panic!("criterion {id} ({name}) failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

/// Symbol count by filling OFDM symbols bit by bit (independent of the
/// ceiling-division implementation under test).
fn brute_force_symbols(psdu_bytes: u32, n_dbps: u32) -> u64 {
    let total_bits = 16 + 8 * u64::from(psdu_bytes) + 6;
    let mut symbols = 0u64;
    let mut room = 0u64;
    for _ in 0..total_bits {
        if room == 0 {
            symbols += 1;
            room = u64::from(n_dbps);
        }
        room -= 1;
    }
    symbols
}

fn brute_force_airtime(psdu_bytes: u32, n_dbps: u32) -> f64 {
    let t = PhyTimingConstants::IEEE_802_11P_10MHZ;
    t.preamble_s + t.sig_s + brute_force_symbols(psdu_bytes, n_dbps) as f64 * t.symbol_s
}

/// Closed-form per-datagram on-air cost and beacon cost at saturation:
/// 6 fragments (5 x 1536 B + 856 B PSDU) each paying
/// DIFS + E[backoff] + airtime + SIFS + ACK, plus one beacon per 100 ms
/// paying DIFS + E[backoff] + beacon airtime.
fn oracle_costs(mcs: McsId) -> (f64, f64) {
    let n_dbps = mcs.profile().data_bits_per_symbol;
    let t = MacTimingConstants::IEEE_802_11P_10MHZ;
    let ack_air = brute_force_airtime(14, McsId::Bpsk12.profile().data_bits_per_symbol);
    let expected_backoff = 7.5 * t.slot_s;
    let per_frame_fixed = t.difs_s + expected_backoff + t.sifs_s + ack_air;
    let datagram_cost: f64 = [1536u32, 1536, 1536, 1536, 1536, 856]
        .iter()
        .map(|&psdu| brute_force_airtime(psdu, n_dbps) + per_frame_fixed)
        .sum();
    let beacon_cost = t.difs_s + expected_backoff + brute_force_airtime(500, n_dbps);
    (datagram_cost, beacon_cost)
}

/// Analytic saturation throughput in bits/second.
fn oracle_throughput(mcs: McsId) -> f64 {
    let (datagram_cost, beacon_cost) = oracle_costs(mcs);
    let beacon_fraction = beacon_cost / 0.1;
    8192.0 * 8.0 * (1.0 - beacon_fraction) / datagram_cost
}

fn anechoic_scenario(device: DeviceKind, mcs: McsId) -> ScenarioConfig {
    ScenarioConfig::new(6.5, device, mcs, scenario_presets()["anechoic"])
}

/// Per-MCS saturated runs in the anechoic chamber setup: the send interval is
/// tuned per seed (the trial-and-error saturation search), then the run at
/// that interval is recorded. Shared by the throughput and trend criteria.
struct SaturatedMcs {
    mcs: McsId,
    runs: Vec<RunMetrics>,
}

fn saturated_anechoic() -> &'static Vec<SaturatedMcs> {
    static DATA: OnceLock<Vec<SaturatedMcs>> = OnceLock::new();
    DATA.get_or_init(|| {
        McsId::ALL
            .into_iter()
            .map(|mcs| {
                let mut sc = anechoic_scenario(DeviceKind::Hp, mcs);
                let runs = (1..=10u64)
                    .map(|seed| {
                        sc.seed = seed;
                        let tuned = sim::saturate_interval(&sc).expect("tuning succeeds");
                        sc.traffic.send_interval_s = tuned;
                        let m = sim::run(&sc).expect("run succeeds");
                        assert_eq!(m.queue_drops, 0, "tuned interval replays drop-free");
                        m
                    })
                    .collect();
                SaturatedMcs { mcs, runs }
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_parameter_table_fidelity() {
    criterion(1, "parameter table fidelity", || {
        let table = builtin_mcs_table();
        ensure!(table.len() == 8, "expected 8 MCS profiles");
        let n_dbps: Vec<u32> = table.iter().map(|m| m.data_bits_per_symbol).collect();
        ensure!(n_dbps == [24, 36, 48, 72, 96, 144, 192, 216], "N_DBPS {n_dbps:?}");
        let rates: Vec<f64> = table.iter().map(|m| m.phy_bitrate_bps).collect();
        ensure!(
            rates == [3e6, 4.5e6, 6e6, 9e6, 12e6, 18e6, 24e6, 27e6],
            "bitrates {rates:?}"
        );
        let thr: Vec<f64> = table.iter().map(|m| m.sinr_threshold_db).collect();
        ensure!(
            thr == [10.0, 15.0, 10.0, 15.0, 17.0, 17.0, 20.0, 25.0],
            "SINR thresholds {thr:?}"
        );

        let (lp, hp) = device_profiles();
        ensure!(lp.tx_power_dbm.values() == [27.0, 26.0, 25.0, 24.0], "LP TX power");
        ensure!(hp.tx_power_dbm.values() == [28.0, 27.0, 26.0, 24.0], "HP TX power");
        ensure!(
            lp.rx_sensitivity_dbm.values() == [-93.0, -85.0, -80.0, -73.0],
            "LP sensitivity"
        );
        ensure!(
            hp.rx_sensitivity_dbm.values() == [-93.0, -88.0, -84.0, -80.0],
            "HP sensitivity"
        );
        ensure!(lp.antenna_gain_dbi == 7.0 && hp.antenna_gain_dbi == 9.0, "antenna gains");
        for d in [&lp, &hp] {
            ensure!(d.system_loss_db == 3.0, "system loss");
            ensure!(d.queue_capacity == 50, "queue capacity");
            ensure!(d.cw_min == 15 && d.cw_max == 1023, "contention window");
        }

        let sc = anechoic_scenario(DeviceKind::Hp, McsId::Bpsk12);
        ensure!(sc.duration_s == 10.0, "duration default");
        ensure!(sc.channel.noise_mean_dbm == -110.0, "noise mean");
        ensure!(sc.channel.noise_sigma_db == 3.0, "noise sigma");
        ensure!(sc.channel.carrier_frequency_hz == 5.9e9, "carrier");
        ensure!(sc.channel.bandwidth_hz == 10e6, "bandwidth");
        ensure!(sc.traffic.udp_payload_bytes == 8192, "UDP payload");
        ensure!(sc.traffic.mtu_bytes == 1500, "MTU");
        ensure!(sc.traffic.beacon_bytes == 500, "beacon length");
        ensure!(sc.traffic.beacon_interval_s == 0.1, "beacon interval");

        let phy = PhyTimingConstants::IEEE_802_11P_10MHZ;
        ensure!(phy.preamble_s == 32e-6, "preamble duration");
        ensure!(phy.sig_s == 8e-6, "SIG duration");
        ensure!(phy.service_bits == 16, "PLCP service length");
        ensure!(phy.tail_bits == 6, "tail length");

        let presets = scenario_presets();
        ensure!(presets["urban"].path_loss_exponent == 2.3, "urban alpha");
        ensure!(presets["urban"].fading == FadingKind::Rician { k_db: 3.36 }, "urban fading");
        ensure!(
            presets["suburban"].fading == FadingKind::Rician { k_db: 2.45 },
            "suburban fading"
        );
        ensure!(presets["suburban"].breakpoint_m == Some(50.0), "suburban breakpoint");
        let seg = presets["suburban"].second_segment.ok_or("suburban second segment")?;
        ensure!(seg.path_loss_exponent == 2.5 && seg.fading == FadingKind::Rayleigh, "NLOS part");
        ensure!(presets["rural"].path_loss_exponent == 2.2, "rural alpha");
        ensure!(presets["rural"].fading == FadingKind::Rician { k_db: 8.0 }, "rural fading");
        ensure!(presets["anechoic"].path_loss_exponent == 2.0, "anechoic alpha");
        ensure!(presets["anechoic"].fading == FadingKind::None, "anechoic fading");
        Ok(())
    });
}

#[test]
fn criterion_02_airtime_oracle() {
    criterion(2, "airtime vs bit-fill oracle", || {
        let phy = PhyTimingConstants::IEEE_802_11P_10MHZ;
        for mcs in builtin_mcs_table() {
            for psdu in 0..=3000u32 {
                let expect_symbols = brute_force_symbols(psdu, mcs.data_bits_per_symbol);
                let got = v2xcalib::phy::frame_airtime(psdu, mcs.data_bits_per_symbol);
                let want = phy.preamble_s + phy.sig_s + expect_symbols as f64 * phy.symbol_s;
                ensure!(
                    got == want,
                    "airtime mismatch at {:?} psdu {psdu}: {got} vs {want}",
                    mcs.id
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_saturation_throughput_oracle() {
    criterion(3, "saturation throughput vs closed form", || {
        for sat in saturated_anechoic() {
            let tputs: Vec<f64> = sat.runs.iter().map(|m| m.throughput_bps()).collect();
            let med = median(&tputs).map_err(|e| e.to_string())?;
            let oracle = oracle_throughput(sat.mcs);
            let err = (med - oracle).abs() / oracle;
            ensure!(
                err <= 0.05,
                "{}: median {:.4} Mb/s vs oracle {:.4} Mb/s ({:.2}% off)",
                sat.mcs,
                med / 1e6,
                oracle / 1e6,
                err * 100.0
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_04_throughput_and_jitter_trends() {
    criterion(4, "throughput rises, jitter falls with bitrate", || {
        let mut tput_medians = Vec::new();
        let mut jitter_medians = Vec::new();
        for sat in saturated_anechoic() {
            let tputs: Vec<f64> = sat.runs.iter().map(|m| m.throughput_bps()).collect();
            tput_medians.push((sat.mcs, median(&tputs).map_err(|e| e.to_string())?));
            let pooled: Vec<f64> =
                sat.runs.iter().flat_map(|m| m.jitter_series_s.iter().copied()).collect();
            jitter_medians.push((sat.mcs, median(&pooled).map_err(|e| e.to_string())?));
        }
        for w in tput_medians.windows(2) {
            ensure!(
                w[1].1 > w[0].1,
                "throughput not strictly increasing: {} {:.4} Mb/s vs {} {:.4} Mb/s",
                w[0].0,
                w[0].1 / 1e6,
                w[1].0,
                w[1].1 / 1e6
            );
        }
        for w in jitter_medians.windows(2) {
            ensure!(
                w[1].1 < w[0].1,
                "jitter not strictly decreasing: {} {:.1} us vs {} {:.1} us",
                w[0].0,
                w[0].1 * 1e6,
                w[1].0,
                w[1].1 * 1e6
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_05_lp_hp_equivalence_at_short_range() {
    criterion(5, "LP and HP identical in the chamber", || {
        for mcs in McsId::ALL {
            for seed in [1u64, 2] {
                let mut lp = anechoic_scenario(DeviceKind::Lp, mcs);
                lp.traffic.send_interval_s = 0.03;
                lp.seed = seed;
                let mut hp = anechoic_scenario(DeviceKind::Hp, mcs);
                hp.traffic.send_interval_s = 0.03;
                hp.seed = seed;
                let m_lp = sim::run(&lp).map_err(|e| e.to_string())?;
                let m_hp = sim::run(&hp).map_err(|e| e.to_string())?;
                ensure!(
                    m_lp == m_hp,
                    "{mcs} seed {seed}: LP and HP metrics differ at 6.5 m"
                );
                ensure!(
                    m_lp.datagrams_received > 0,
                    "{mcs} seed {seed}: nothing delivered in the chamber"
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_distance_monotonicity_and_cliff() {
    criterion(6, "throughput monotone in distance; hard cliff without fading", || {
        let presets = scenario_presets();
        let cases: Vec<(&str, Vec<f64>, Vec<DeviceKind>)> = vec![
            ("urban", vec![50.0, 110.0], vec![DeviceKind::Lp, DeviceKind::Hp]),
            ("suburban", vec![30.0, 60.0, 200.0], vec![DeviceKind::Lp, DeviceKind::Hp]),
            ("rural", vec![550.0, 700.0], vec![DeviceKind::Hp]),
        ];
        let seeds: Vec<u64> = (1..=20).collect();
        for (name, distances, devices) in &cases {
            for &device in devices {
                for mcs in McsId::ALL {
                    // Saturating load with headroom for retry inflation.
                    let (dgram_cost, beacon_cost) = oracle_costs(mcs);
                    let interval = dgram_cost / (1.0 - beacon_cost / 0.1) * 1.3;
                    let mut sc = ScenarioConfig::new(1.0, device, mcs, presets[*name]);
                    sc.traffic.send_interval_s = interval;
                    let mut medians = Vec::new();
                    for &d in distances {
                        let mut tputs = Vec::new();
                        for &seed in &seeds {
                            sc.distance_m = d;
                            sc.seed = seed;
                            tputs.push(
                                sim::run(&sc).map_err(|e| e.to_string())?.throughput_bps(),
                            );
                        }
                        medians.push(median(&tputs).map_err(|e| e.to_string())?);
                    }
                    for (w, pair) in medians.windows(2).enumerate() {
                        ensure!(
                            pair[1] <= pair[0],
                            "{name}/{device}/{mcs}: median throughput grows from {} m ({:.4} Mb/s) to {} m ({:.4} Mb/s)",
                            distances[w],
                            pair[0] / 1e6,
                            distances[w + 1],
                            pair[1] / 1e6
                        );
                    }
                }
            }
        }

        // Threshold mode without fading and without noise spread: delivery
        // versus distance is a single cliff.
        for (name, _, _) in &cases {
            let mut channel = presets[*name];
            channel.fading = FadingKind::None;
            channel.noise_sigma_db = 0.0;
            if let Some(seg) = channel.second_segment.as_mut() {
                seg.fading = FadingKind::None;
            }
            for mcs in [McsId::Bpsk12, McsId::Qam64ThreeQuarters] {
                let mut sc = ScenarioConfig::new(1.0, DeviceKind::Hp, mcs, channel);
                sc.duration_s = 3.0;
                sc.traffic.send_interval_s = 0.05;
                let mut received = Vec::new();
                for i in 0..28 {
                    sc.distance_m = 10.0 * (20_000.0f64 / 10.0).powf(i as f64 / 27.0);
                    sc.seed = 7;
                    received.push(sim::run(&sc).map_err(|e| e.to_string())?.datagrams_received);
                }
                ensure!(received[0] > 0, "{name}/{mcs}: nothing delivered at 10 m");
                ensure!(*received.last().unwrap() == 0, "{name}/{mcs}: delivery at 20 km");
                let transitions = received
                    .windows(2)
                    .filter(|w| (w[0] > 0) != (w[1] > 0))
                    .count();
                ensure!(
                    transitions == 1,
                    "{name}/{mcs}: expected a single cliff, got {transitions} transitions ({received:?})"
                );
                // On the delivering side the rate never dips part-way.
                let cliff = received.iter().position(|&r| r == 0).unwrap();
                for (i, &r) in received[..cliff].iter().enumerate() {
                    ensure!(
                        r + 1 >= received[0],
                        "{name}/{mcs}: partial delivery before the cliff at index {i}: {received:?}"
                    );
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_07_statistics_correctness() {
    criterion(7, "boxplot, outlier rate, jitter recurrence", || {
        let b = boxplot(&(1..=10).map(f64::from).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
        ensure!(b.median == 5.5 && b.q1 == 3.25 && b.q3 == 7.75, "1..10 quartiles {b:?}");
        let b = boxplot(&[5.0, 5.0, 5.0, 5.0]).map_err(|e| e.to_string())?;
        ensure!(
            b.q1 == 5.0 && b.median == 5.0 && b.q3 == 5.0 && b.sigma == 0.0 && b.outliers.is_empty(),
            "constant vector summary {b:?}"
        );
        let b = boxplot(&[1.0, 2.0, 3.0, 4.0]).map_err(|e| e.to_string())?;
        ensure!(b.q1 == 1.75 && b.median == 2.5 && b.q3 == 3.25, "1..4 quartiles {b:?}");

        // Outlier fraction on N(0,1): 2*(1 - Phi(2.7)) = 0.694%.
        let mut rng = SimRng::from_seed(77);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 1.0)).collect();
        let b = boxplot(&samples).map_err(|e| e.to_string())?;
        let fraction = b.outliers.len() as f64 / n as f64;
        ensure!(
            (fraction - 0.0069).abs() <= 0.0015,
            "outlier fraction {fraction:.5} not within 0.69% +/- 0.15%"
        );

        // Jitter recurrence against an algebraically different reference:
        // J_i = (15*J_{i-1} + |D_i|) / 16.
        for case in 0..10_000 {
            let mut rng = SimRng::from_seed(1000 + case);
            let len = 3 + (rng.next_u64() % 48) as usize;
            let mut records = Vec::with_capacity(len);
            let mut send = 0.0;
            for _ in 0..len {
                send += 0.001 + rng.uniform_f64() * 0.02;
                let transit = 0.001 + rng.uniform_f64() * 0.005;
                records.push((send, send + transit));
            }
            records.sort_by(|a: &(f64, f64), b| a.1.partial_cmp(&b.1).unwrap());
            let series = jitter_rfc1889(&records).map_err(|e| e.to_string())?;
            let mut j = 0.0;
            for (i, w) in records.windows(2).enumerate() {
                let d = ((w[1].1 - w[0].1) - (w[1].0 - w[0].0)).abs();
                j = (15.0 * j + d) / 16.0;
                let rel = (series[i] - j).abs() / j.abs().max(1e-300);
                ensure!(
                    rel <= 1e-12,
                    "case {case}: jitter diverges from reference at step {i}: {} vs {j}",
                    series[i]
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_trend_invariance() {
    criterion(8, "trend comparison is scale- and rank-invariant", || {
        let mut rng = SimRng::from_seed(88);
        // Positive constant scaling, including the 56000 jitter factor.
        for case in 0..50 {
            let scale = if case == 0 { 56000.0 } else { 10f64.powf(rng.normal(0.0, 2.0)) };
            let n = 3 + (rng.next_u64() % 6) as usize;
            let mut sim_map = BTreeMap::new();
            let mut trial_map = BTreeMap::new();
            for i in 0..n {
                let center = 1.0 + rng.uniform_f64() * 9.0;
                let samples = vec![center * 0.9, center, center * 1.1];
                trial_map.insert(
                    format!("HP:bpsk12:{}", i + 1),
                    samples.iter().map(|x| x * scale).collect::<Vec<f64>>(),
                );
                sim_map.insert(format!("HP:bpsk12:{}", i + 1), samples);
            }
            let report = trend_compare(&sim_map, &trial_map).map_err(|e| e.to_string())?;
            ensure!(
                (report.rank_correlation - 1.0).abs() < 1e-9,
                "case {case}: rho {} under scale {scale}",
                report.rank_correlation
            );
            ensure!(
                (report.scale_factor - scale).abs() / scale < 1e-9,
                "case {case}: scale factor {} vs {scale}",
                report.scale_factor
            );
            for p in &report.pairs {
                ensure!(
                    p.scaled_deviation < 1e-9,
                    "case {case}: scaled deviation {} at {}",
                    p.scaled_deviation,
                    p.condition
                );
            }
        }

        // Strictly monotone transforms leave the rank correlation at 1.
        for case in 0..100 {
            let a = 0.5 + rng.uniform_f64();
            let b = 0.1 + rng.uniform_f64();
            let c = rng.normal(0.0, 1.0);
            let n = 3 + (rng.next_u64() % 6) as usize;
            let mut sim_map = BTreeMap::new();
            let mut trial_map = BTreeMap::new();
            for i in 0..n {
                let v = rng.normal(0.0, 2.0);
                let base = vec![v - 0.1, v, v + 0.1];
                let transformed: Vec<f64> =
                    base.iter().map(|&x| a * (b * x).exp() + a * x + c).collect();
                sim_map.insert(format!("HP:bpsk12:{}", i + 1), base);
                trial_map.insert(format!("HP:bpsk12:{}", i + 1), transformed);
            }
            let report = trend_compare(&sim_map, &trial_map).map_err(|e| e.to_string())?;
            ensure!(
                (report.rank_correlation - 1.0).abs() < 1e-9,
                "case {case}: rho {} under a monotone transform",
                report.rank_correlation
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_09_calibration_recovery() {
    criterion(9, "channel parameters recovered from held-out trials", || {
        let truth = FadingKind::Rician { k_db: 3.36 };
        let mut base = ScenarioConfig::new(
            1000.0,
            DeviceKind::Hp,
            McsId::Qam64ThreeQuarters,
            ChannelConfig::simple(2.3, truth),
        );
        base.traffic.send_interval_s = 0.02;
        let conditions: Vec<(McsId, f64)> = vec![
            (McsId::Qam64ThreeQuarters, 1100.0),
            (McsId::Qam64ThreeQuarters, 1200.0),
            (McsId::Qam64ThreeQuarters, 1300.0),
            (McsId::Qam64ThreeQuarters, 1400.0),
            (McsId::Qam16ThreeQuarters, 1650.0),
            (McsId::Qam16ThreeQuarters, 1800.0),
            (McsId::Qam16ThreeQuarters, 1950.0),
            (McsId::Qam16ThreeQuarters, 2100.0),
            (McsId::Qpsk12, 2450.0),
            (McsId::Qpsk12, 2650.0),
            (McsId::Qpsk12, 2850.0),
            (McsId::Qpsk12, 3050.0),
        ];

        // Synthesize "trial" data at the true parameters with held-out seeds.
        let trial_seeds: Vec<u64> = (101..=110).collect();
        let mut trial = BTreeMap::new();
        for &(mcs, d) in &conditions {
            let mut samples = Vec::new();
            for &seed in &trial_seeds {
                let mut sc = base.clone();
                sc.mcs = mcs;
                sc.distance_m = d;
                sc.seed = seed;
                samples.extend(sim::run(&sc).map_err(|e| e.to_string())?.throughput_samples_bps);
            }
            trial.insert(format!("HP:{}:{}", mcs.token(), fmt_sig9(d)), samples);
        }

        let grid = CalibrationGrid {
            alphas: (0..7).map(|i| 2.0 + 0.1 * i as f64).collect(),
            fadings: (0..21).map(|i| FadingKind::Rician { k_db: 0.5 * i as f64 }).collect(),
        };
        let sim_seeds: Vec<u64> = (1..=10).collect();
        let result =
            calibrate(&trial, &base, &grid, &sim_seeds, None).map_err(|e| e.to_string())?;

        ensure!(result.grid.len() == 7 * 21, "grid cardinality {}", result.grid.len());
        ensure!(
            (result.best_alpha - 2.3).abs() <= 0.1 + 1e-9,
            "alpha {} not within one grid step of 2.3",
            result.best_alpha
        );
        let best_k = match result.best_fading {
            FadingKind::Rician { k_db } => k_db,
            other => return Err(format!("recovered fading {other} is not Rician")),
        };
        ensure!(
            (best_k - 3.36).abs() <= 0.5 + 1e-9,
            "K {best_k} dB not within one grid step of 3.36 dB"
        );
        Ok(())
    });
}

#[test]
fn criterion_10_link_budget_equations() {
    criterion(10, "bandwidth scaling and MOS linearity", || {
        for x in [0.5, 1.0, 4.2, 1234.5] {
            let halved = scale_tx_energy_for_bandwidth(x, 20e6, 10e6).map_err(|e| e.to_string())?;
            ensure!(halved == 2.0 * x, "halving B must exactly double Es/N0, got {halved}");
            let same = scale_tx_energy_for_bandwidth(x, 20e6, 20e6).map_err(|e| e.to_string())?;
            ensure!(same == x, "identity scaling");
            let quartered =
                scale_tx_energy_for_bandwidth(x, 20e6, 5e6).map_err(|e| e.to_string())?;
            let staged = scale_tx_energy_for_bandwidth(
                scale_tx_energy_for_bandwidth(x, 20e6, 10e6).map_err(|e| e.to_string())?,
                10e6,
                5e6,
            )
            .map_err(|e| e.to_string())?;
            ensure!(quartered == staged, "composition of halvings");
            let db_shift = 10.0 * (halved / x).log10();
            ensure!((db_shift - 3.01).abs() <= 0.001, "Es shift {db_shift} dB");
        }

        let three_db = 10.0 * 2f64.log10();
        for (b, nf, t, g) in [(10e6, 6.0, 290.0, 9.0), (20e6, 0.0, 290.0, 0.0), (5e6, 3.0, 250.0, 7.0)] {
            for thr in [10.0, 17.0, 25.0] {
                let full = mos_dbm(thr, b, nf, t, g);
                let half = mos_dbm(thr, b / 2.0, nf, t, g);
                ensure!(
                    ((full - half) - three_db).abs() <= 0.001,
                    "MOS shift per halving {} dB at B {b}",
                    full - half
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_11_determinism() {
    criterion(11, "byte-identical reruns", || {
        let presets = scenario_presets();
        let mut urban = ScenarioConfig::new(110.0, DeviceKind::Lp, McsId::Qam64TwoThirds, presets["urban"]);
        urban.seed = 42;
        urban.traffic.send_interval_s = 0.01;
        urban.reception_mode = v2xcalib::config::ReceptionMode::BerBased;
        let mut suburban =
            ScenarioConfig::new(200.0, DeviceKind::Hp, McsId::Qam16ThreeQuarters, presets["suburban"]);
        suburban.seed = 7;
        suburban.traffic.send_interval_s = 0.008;

        for (name, sc) in [("urban", urban), ("suburban", suburban)] {
            let a = sim::run(&sc).map_err(|e| e.to_string())?;
            let b = sim::run(&sc).map_err(|e| e.to_string())?;
            ensure!(a == b, "{name}: RunMetrics differ between identical runs");
            let json_a = serde_json::to_string(&a).map_err(|e| e.to_string())?;
            let json_b = serde_json::to_string(&b).map_err(|e| e.to_string())?;
            ensure!(json_a == json_b, "{name}: serialized metrics differ");

            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let (csv_1, sum_1) =
                v2xcalib::io::write_run_outputs(&dir.path().join("one"), name, &sc, &a)
                    .map_err(|e| e.to_string())?;
            let (csv_2, sum_2) =
                v2xcalib::io::write_run_outputs(&dir.path().join("two"), name, &sc, &b)
                    .map_err(|e| e.to_string())?;
            let bytes = |p: &std::path::Path| std::fs::read(p).map_err(|e| e.to_string());
            ensure!(bytes(&csv_1)? == bytes(&csv_2)?, "{name}: record CSVs differ");
            ensure!(bytes(&sum_1)? == bytes(&sum_2)?, "{name}: JSON summaries differ");
        }
        Ok(())
    });
}
