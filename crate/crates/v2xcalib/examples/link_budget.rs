//! Link-budget building blocks: frame airtime, log-distance path loss, the
//! received-power equation, Es/N0 bandwidth rescaling, and the Minimum
//! Operational Sensitivity relation.
//!
//! ```text
//! cargo run --release --example link_budget
//! ```

use v2xcalib::config::{builtin_mcs_table, device_profiles, McsId};
use v2xcalib::phy::{frame_airtime, mos_dbm, path_loss_db, rx_power_dbm, scale_tx_energy_for_bandwidth};

fn main() {
    println!("Frame airtime (40 us header + data symbols), 1536 B fragment PSDU:");
    for mcs in builtin_mcs_table() {
        println!(
            "  {:>9}: N_DBPS {:>3}, {:>4.1} Mb/s, airtime {:>7.1} us",
            mcs.id.token(),
            mcs.data_bits_per_symbol,
            mcs.phy_bitrate_bps / 1e6,
            frame_airtime(1536, mcs.data_bits_per_symbol) * 1e6
        );
    }

    println!("\nLog-distance path loss at 5.9 GHz (1 m Friis anchor):");
    for alpha in [2.0, 2.3, 2.5] {
        let losses: Vec<String> = [10.0, 50.0, 110.0, 550.0]
            .iter()
            .map(|&d| format!("{d} m: {:>6.2} dB", path_loss_db(d, alpha, 5.9e9).unwrap()))
            .collect();
        println!("  alpha {alpha}: {}", losses.join(", "));
    }

    let (lp, hp) = device_profiles();
    let mcs = McsId::Qam64ThreeQuarters.profile();
    let pl = path_loss_db(110.0, 2.3, 5.9e9).unwrap();
    println!("\nReceived power at 110 m urban, 64-QAM 3/4:");
    for dev in [&lp, &hp] {
        let rx = rx_power_dbm(
            dev.tx_power_dbm.get(mcs.modulation),
            dev.antenna_gain_dbi,
            dev.antenna_gain_dbi,
            dev.system_loss_db,
            pl,
            0.0,
        );
        let sens = dev.rx_sensitivity_dbm.get(mcs.modulation);
        println!(
            "  {}: rx {rx:.2} dBm vs sensitivity {sens:.1} dBm (margin {:+.2} dB)",
            dev.kind,
            rx - sens
        );
    }

    println!("\nEs/N0 rescaling from the 20 MHz datasheet bandwidth to 10 MHz:");
    let at_20 = 100.0;
    let at_10 = scale_tx_energy_for_bandwidth(at_20, 20e6, 10e6).unwrap();
    println!(
        "  Es/N0 {at_20:.0} at 20 MHz -> {at_10:.0} at 10 MHz ({:+.2} dB: halving B doubles Es)",
        10.0 * (at_10 / at_20).log10()
    );

    println!("\nMinimum Operational Sensitivity (NF 6 dB, 290 K, G_rx 9 dBi):");
    for (thr, label) in [(10.0, "BPSK/QPSK 1/2"), (17.0, "16-QAM"), (25.0, "64-QAM 3/4")] {
        let at_10 = mos_dbm(thr, 10e6, 6.0, 290.0, 9.0);
        let at_20 = mos_dbm(thr, 20e6, 6.0, 290.0, 9.0);
        println!(
            "  SINR_thr {thr:>4.1} dB ({label:>13}): MOS {at_10:>7.2} dBm at 10 MHz, {at_20:>7.2} dBm at 20 MHz"
        );
    }
}
