//! Saturation throughput per MCS in the anechoic chamber setup.
//!
//! For each of the eight 802.11p modulation-and-coding schemes this tunes the
//! UDP send interval until the channel is fully utilized without MAC queue
//! drops (the trial-and-error saturation search), runs ten seeded
//! simulations, and compares the median transport-layer throughput against a
//! closed-form airtime-sum estimate.
//!
//! ```text
//! cargo run --release --example anechoic_saturation
//! ```

use v2xcalib::config::{scenario_presets, DeviceKind, McsId, ScenarioConfig};
use v2xcalib::mac::MacTimingConstants;
use v2xcalib::phy::frame_airtime;
use v2xcalib::sim;
use v2xcalib::stats::median;

fn analytic_saturation_bps(mcs: McsId) -> f64 {
    let n_dbps = mcs.profile().data_bits_per_symbol;
    let t = MacTimingConstants::IEEE_802_11P_10MHZ;
    let ack = frame_airtime(14, McsId::Bpsk12.profile().data_bits_per_symbol);
    let per_frame = t.difs_s + 7.5 * t.slot_s + t.sifs_s + ack;
    // An 8192 B datagram fragments into five 1536 B and one 856 B PSDU.
    let datagram: f64 = [1536u32, 1536, 1536, 1536, 1536, 856]
        .iter()
        .map(|&p| frame_airtime(p, n_dbps) + per_frame)
        .sum();
    let beacon = t.difs_s + 7.5 * t.slot_s + frame_airtime(500, n_dbps);
    8192.0 * 8.0 * (1.0 - beacon / 0.1) / datagram
}

fn main() {
    println!("Anechoic chamber, 6.5 m, HP transceivers, threshold reception\n");
    println!(
        "{:>10} {:>12} {:>14} {:>14} {:>8}",
        "MCS", "interval", "sim median", "analytic", "error"
    );
    for mcs in McsId::ALL {
        let mut sc = ScenarioConfig::new(6.5, DeviceKind::Hp, mcs, scenario_presets()["anechoic"]);
        let mut throughputs = Vec::new();
        let mut tuned_first = 0.0;
        for seed in 1..=10 {
            sc.seed = seed;
            let tuned = sim::saturate_interval(&sc).expect("saturation tuning");
            if seed == 1 {
                tuned_first = tuned;
            }
            sc.traffic.send_interval_s = tuned;
            let metrics = sim::run(&sc).expect("simulation");
            assert_eq!(metrics.queue_drops, 0);
            throughputs.push(metrics.throughput_bps());
        }
        let med = median(&throughputs).unwrap();
        let oracle = analytic_saturation_bps(mcs);
        println!(
            "{:>10} {:>9.3} ms {:>11.3} Mb/s {:>9.3} Mb/s {:>+7.2}%",
            mcs.token(),
            tuned_first * 1e3,
            med / 1e6,
            oracle / 1e6,
            100.0 * (med - oracle) / oracle
        );
    }
}
