//! Channel-parameter calibration demo: "trial" data is synthesized by the
//! simulator at known channel parameters with one set of seeds, then the
//! grid search recovers those parameters from the data using different
//! (held-out) seeds.
//!
//! The conditions sit near each MCS's reception cliff, where throughput
//! actually responds to the path-loss exponent and the Rician K-factor. A
//! coarse grid keeps this demo quick; the acceptance suite runs the full
//! 7 x 21 grid.
//!
//! ```text
//! cargo run --release --example calibration_recovery
//! ```

use std::collections::BTreeMap;

use v2xcalib::calib::{calibrate, CalibrationGrid};
use v2xcalib::config::{ChannelConfig, DeviceKind, FadingKind, McsId, ScenarioConfig};
use v2xcalib::io::fmt_sig9;
use v2xcalib::sim;

fn main() {
    let truth = (2.3, 3.5);
    let mut base = ScenarioConfig::new(
        1000.0,
        DeviceKind::Hp,
        McsId::Qam64ThreeQuarters,
        ChannelConfig::simple(truth.0, FadingKind::Rician { k_db: truth.1 }),
    );
    base.duration_s = 10.0;
    base.traffic.send_interval_s = 0.02;

    let conditions = [
        (McsId::Qam64ThreeQuarters, 1150.0),
        (McsId::Qam64ThreeQuarters, 1300.0),
        (McsId::Qam16ThreeQuarters, 1750.0),
        (McsId::Qam16ThreeQuarters, 1950.0),
        (McsId::Qpsk12, 2550.0),
        (McsId::Qpsk12, 2850.0),
    ];

    println!("synthesizing trial data at alpha={}, K={} dB ...", truth.0, truth.1);
    let mut trial = BTreeMap::new();
    for (mcs, d) in conditions {
        let mut samples = Vec::new();
        for seed in 201..=208u64 {
            let mut sc = base.clone();
            sc.mcs = mcs;
            sc.distance_m = d;
            sc.seed = seed;
            samples.extend(sim::run(&sc).expect("trial run").throughput_samples_bps);
        }
        trial.insert(format!("HP:{}:{}", mcs.token(), fmt_sig9(d)), samples);
    }

    let grid = CalibrationGrid {
        alphas: vec![2.1, 2.2, 2.3, 2.4, 2.5],
        fadings: (0..7).map(|i| FadingKind::Rician { k_db: 0.5 + i as f64 }).collect(),
    };
    println!(
        "searching {} grid points with held-out seeds ...\n",
        grid.alphas.len() * grid.fadings.len()
    );
    let result = calibrate(&trial, &base, &grid, &[1, 2, 3, 4, 5, 6, 7, 8], None).expect("calibration");

    println!("truth:     alpha={}, fading=rician(k={} dB)", truth.0, truth.1);
    println!("recovered: alpha={}, fading={}", result.best_alpha, result.best_fading);
    println!("divergence at the optimum: {:.3e}\n", result.divergence);

    println!("divergence surface (rows: alpha, columns: K in dB):");
    print!("{:>6}", "");
    for f in &grid.fadings {
        if let FadingKind::Rician { k_db } = f {
            print!("{k_db:>10}");
        }
    }
    println!();
    for &alpha in &grid.alphas {
        print!("{alpha:>6}");
        for point in result.grid.iter().filter(|p| p.alpha == alpha) {
            print!("{:>10.2e}", point.divergence);
        }
        println!();
    }
}
