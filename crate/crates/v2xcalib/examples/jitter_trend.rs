//! RFC 1889 inter-arrival jitter versus MCS at channel saturation.
//!
//! Low MCSs spend much longer on air per datagram and suffer larger beacon
//! interruptions, so their jitter is highest; the trend falls monotonically
//! as the bitrate grows. Absolute values are simulator-side only — real
//! devices add scheduler noise orders of magnitude larger, which is why
//! comparisons against trials must be trend-based (see the `trend_compare`
//! example).
//!
//! ```text
//! cargo run --release --example jitter_trend
//! ```

use v2xcalib::config::{scenario_presets, DeviceKind, McsId, ScenarioConfig};
use v2xcalib::sim;
use v2xcalib::stats::{boxplot, median};

fn main() {
    println!("Jitter at saturation, anechoic chamber, HP transceivers\n");
    println!("{:>10} {:>12} {:>12} {:>12}", "MCS", "median", "q1", "q3");
    let mut previous: Option<f64> = None;
    for mcs in McsId::ALL {
        let mut sc = ScenarioConfig::new(6.5, DeviceKind::Hp, mcs, scenario_presets()["anechoic"]);
        let mut pooled = Vec::new();
        for seed in 1..=10 {
            sc.seed = seed;
            sc.traffic.send_interval_s = sim::saturate_interval(&sc).expect("tuning");
            pooled.extend(sim::run(&sc).expect("simulation").jitter_series_s);
        }
        let b = boxplot(&pooled).unwrap();
        println!(
            "{:>10} {:>9.1} us {:>9.1} us {:>9.1} us",
            mcs.token(),
            b.median * 1e6,
            b.q1 * 1e6,
            b.q3 * 1e6
        );
        if let Some(prev) = previous {
            assert!(b.median < prev, "jitter should fall as the bitrate grows");
        }
        previous = Some(median(&pooled).unwrap());
    }
    println!("\nJitter falls monotonically from BPSK 1/2 to 64-QAM 3/4.");
}
