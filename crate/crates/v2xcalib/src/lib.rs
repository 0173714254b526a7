//! Discrete-event IEEE 802.11p/DSRC link-level simulator with a calibration
//! harness that compares simulated link metrics against real-world trial logs
//! and tunes channel parameters to minimize the divergence.
//!
//! The crate models one stationary OBU→RSU link: a saturating UDP stream
//! (fragmented over a 1500-byte MTU) plus periodic broadcast beacons drive a
//! CSMA/CA MAC with a bounded queue, and every frame reception is decided by
//! a log-distance path loss, Rician/Rayleigh fading, and Gaussian background
//! noise channel with per-MCS sensitivity and SINR thresholds taken from
//! manufacturer datasheets.
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --release --example anechoic_saturation    # per-MCS saturation throughput
//! cargo run --release --example jitter_trend           # RFC 1889 jitter vs MCS
//! cargo run --release --example distance_sweep         # urban/suburban/rural distance sweeps
//! cargo run --release --example link_budget            # airtime, path loss, MOS relations
//! cargo run --release --example fading_channels        # fading sampler sanity checks
//! cargo run --release --example trend_compare          # sim-vs-trial trend report
//! cargo run --release --example calibration_recovery   # channel parameter grid search
//! ```
//!
//! The `v2xcalib` binary exposes the same machinery as `simulate`, `tune`,
//! `sweep`, `compare`, `calibrate`, and `report` subcommands.

pub mod calib;
pub mod cli;
pub mod config;
pub mod io;
pub mod mac;
pub mod phy;
pub mod rng;
pub mod sim;
pub mod stats;

pub use calib::{calibrate, trend_compare, CalibrationGrid, CalibrationResult, ConditionKey, TrendReport};
pub use config::{
    builtin_mcs_table, device_profiles, scenario_presets, ChannelConfig, DeviceKind, DeviceProfile,
    FadingKind, McsId, McsProfile, Modulation, ReceptionMode, ScenarioConfig, TrafficConfig,
};
pub use mac::{BackoffState, MacQueue, MacTimingConstants};
pub use phy::{
    ber, fading_gain_db, frame_airtime, frame_success, mos_dbm, noise_sample_dbm, path_loss_db,
    rx_power_dbm, scale_tx_energy_for_bandwidth, FrameTxParams, LinkBudget, PhyTimingConstants,
    RxOutcome,
};
pub use rng::SimRng;
pub use sim::{
    fragment_ip_payloads, run, run_with_options, saturate_interval, sweep, RunMetrics, RunOptions,
    RxRecord, SweepAxes, SweepRow,
};
pub use stats::{boxplot, jitter_rfc1889, median, spearman_rho, BoxplotSummary};
