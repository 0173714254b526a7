//! PHY layer and channel model: frame airtime from the 802.11p frame
//! structure, the log-distance/Friis link budget with Rician/Rayleigh fading
//! and Gaussian background noise, the bandwidth-scaling link-budget relations,
//! Gaussian error-function BER curves, and per-frame reception decisions.
//!
//! Everything here is a pure function of its arguments plus an explicitly
//! passed [`SimRng`]; callers own the generator state.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ChannelConfig, FadingKind, Modulation, ReceptionMode, SPEED_OF_LIGHT_MPS};
use crate::rng::SimRng;

/// Boltzmann constant, J/K.
pub const BOLTZMANN_J_PER_K: f64 = 1.380_649e-23;

#[derive(Debug, Error)]
pub enum PhyError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// Field durations and lengths of the 802.11p PHY frame at 10 MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhyTimingConstants {
    pub preamble_s: f64,
    pub sig_s: f64,
    pub symbol_s: f64,
    pub service_bits: u32,
    pub tail_bits: u32,
}

impl PhyTimingConstants {
    pub const IEEE_802_11P_10MHZ: PhyTimingConstants = PhyTimingConstants {
        preamble_s: 32e-6,
        sig_s: 8e-6,
        symbol_s: 8e-6,
        service_bits: 16,
        tail_bits: 6,
    };

    /// Preamble plus SIG: the fixed 40 µs frame header.
    pub fn header_s(&self) -> f64 {
        self.preamble_s + self.sig_s
    }
}

impl Default for PhyTimingConstants {
    fn default() -> Self {
        Self::IEEE_802_11P_10MHZ
    }
}

/// On-air duration of a frame carrying `psdu_bytes`, in seconds.
///
/// The Data field holds service bits, the PSDU, and tail bits, padded up to a
/// whole number of OFDM symbols: `40 µs + 8 µs · ceil((16 + 8·psdu + 6) / N_DBPS)`.
pub fn frame_airtime(psdu_bytes: u32, n_dbps: u32) -> f64 {
    frame_airtime_with(&PhyTimingConstants::IEEE_802_11P_10MHZ, psdu_bytes, n_dbps)
}

pub fn frame_airtime_with(timing: &PhyTimingConstants, psdu_bytes: u32, n_dbps: u32) -> f64 {
    let data_bits = u64::from(timing.service_bits) + 8 * u64::from(psdu_bytes) + u64::from(timing.tail_bits);
    let symbols = data_bits.div_ceil(u64::from(n_dbps));
    timing.header_s() + symbols as f64 * timing.symbol_s
}

/// Log-distance path loss anchored on free space at d₀ = 1 m:
/// `PL(d) = 20·log10(4π·f/c) + 10·α·log10(d)`, in dB.
pub fn path_loss_db(distance_m: f64, alpha: f64, freq_hz: f64) -> Result<f64, PhyError> {
    if !(distance_m > 0.0) {
        return Err(PhyError::Domain(format!(
            "path loss undefined for distance {distance_m} m"
        )));
    }
    Ok(friis_intercept_db(freq_hz) + 10.0 * alpha * distance_m.log10())
}

/// Free-space path loss at the 1 m reference distance.
fn friis_intercept_db(freq_hz: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * freq_hz / SPEED_OF_LIGHT_MPS).log10()
}

/// Path loss of a (possibly two-segment) channel at the given distance.
///
/// Beyond the breakpoint the second exponent applies to the remaining
/// distance only, keeping the curve continuous at the breakpoint.
pub fn channel_path_loss_db(channel: &ChannelConfig, distance_m: f64) -> Result<f64, PhyError> {
    let f = channel.carrier_frequency_hz;
    match (channel.breakpoint_m, channel.second_segment) {
        (Some(bp), Some(seg)) if distance_m > bp => {
            let at_bp = path_loss_db(bp, channel.path_loss_exponent, f)?;
            Ok(at_bp + 10.0 * seg.path_loss_exponent * (distance_m / bp).log10())
        }
        _ => path_loss_db(distance_m, channel.path_loss_exponent, f),
    }
}

/// One small-scale fading power gain in dB.
///
/// Rician: `h` is a unit-power complex Gaussian with a LOS component of
/// relative power `K/(K+1)`, so `E[|h|²] = 1`; the returned gain is
/// `10·log10(|h|²)`. Rayleigh is the K = 0 special case, no fading is 0 dB.
pub fn fading_gain_db(fading: FadingKind, rng: &mut SimRng) -> f64 {
    match fading {
        FadingKind::None => 0.0,
        FadingKind::Rayleigh => rician_power_gain_db(0.0, rng),
        FadingKind::Rician { k_db } => rician_power_gain_db(10f64.powf(k_db / 10.0), rng),
    }
}

fn rician_power_gain_db(k_linear: f64, rng: &mut SimRng) -> f64 {
    let los = (k_linear / (k_linear + 1.0)).sqrt();
    let sigma = (0.5 / (k_linear + 1.0)).sqrt();
    let re = los + sigma * rng.normal(0.0, 1.0);
    let im = sigma * rng.normal(0.0, 1.0);
    10.0 * (re * re + im * im).log10()
}

/// One background-noise draw in dBm from the channel's Normal model.
pub fn noise_sample_dbm(channel: &ChannelConfig, rng: &mut SimRng) -> f64 {
    rng.normal(channel.noise_mean_dbm, channel.noise_sigma_db)
}

/// Received power in dBm: all terms combine additively in the dB domain.
pub fn rx_power_dbm(
    tx_dbm: f64,
    tx_gain_dbi: f64,
    rx_gain_dbi: f64,
    system_loss_db: f64,
    path_loss_db: f64,
    fading_db: f64,
) -> f64 {
    tx_dbm + tx_gain_dbi + rx_gain_dbi - system_loss_db - path_loss_db + fading_db
}

/// Rescales an Es/N0 ratio measured at bandwidth `b1` to bandwidth `b2`.
///
/// With the carrier-to-noise ratio fixed and N₀ defined per unit bandwidth,
/// the symbol time (and hence the energy per symbol) scales with `1/B`:
/// halving the bandwidth from 20 MHz to 10 MHz doubles Es/N0 (+3.01 dB).
pub fn scale_tx_energy_for_bandwidth(es_n0_at_b1: f64, b1_hz: f64, b2_hz: f64) -> Result<f64, PhyError> {
    if !(b1_hz > 0.0) || !(b2_hz > 0.0) {
        return Err(PhyError::Domain(format!(
            "bandwidths must be positive, got {b1_hz} and {b2_hz}"
        )));
    }
    Ok(es_n0_at_b1 * (b1_hz / b2_hz))
}

/// Minimum Operational Sensitivity in dBm:
/// `MOS = SINR_thr · k · T_α · B · NF / G_rx`, evaluated in the linear domain.
///
/// Proportional to bandwidth (halving B lowers MOS by 3.01 dB) and inversely
/// proportional to the receive antenna gain.
pub fn mos_dbm(
    sinr_thr_db: f64,
    bandwidth_hz: f64,
    noise_figure_db: f64,
    noise_temp_k: f64,
    rx_gain_dbi: f64,
) -> f64 {
    let sinr = 10f64.powf(sinr_thr_db / 10.0);
    let nf = 10f64.powf(noise_figure_db / 10.0);
    let g_rx = 10f64.powf(rx_gain_dbi / 10.0);
    let watts = sinr * BOLTZMANN_J_PER_K * noise_temp_k * bandwidth_hz * nf / g_rx;
    10.0 * watts.log10() + 30.0
}

/// Receiver link-budget terms in the linear domain.
///
/// `noise_figure` and `noise_temp_k` have no measured values for the trial
/// NICs; the defaults (NF = 6 dB, 290 K) only feed [`LinkBudget::mos_dbm`],
/// never the simulation path, which uses the datasheet sensitivities directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub carrier_to_noise: f64,
    pub bandwidth_hz: f64,
    pub symbol_rate_hz: f64,
    pub boltzmann_j_per_k: f64,
    pub noise_temp_k: f64,
    pub noise_figure: f64,
    pub rx_gain: f64,
    pub sinr_threshold: f64,
}

impl LinkBudget {
    pub fn new(
        carrier_to_noise: f64,
        bandwidth_hz: f64,
        symbol_rate_hz: f64,
        noise_temp_k: f64,
        noise_figure: f64,
        rx_gain: f64,
        sinr_threshold: f64,
    ) -> Result<Self, PhyError> {
        let budget = LinkBudget {
            carrier_to_noise,
            bandwidth_hz,
            symbol_rate_hz,
            boltzmann_j_per_k: BOLTZMANN_J_PER_K,
            noise_temp_k,
            noise_figure,
            rx_gain,
            sinr_threshold,
        };
        for (name, v) in [
            ("carrier_to_noise", carrier_to_noise),
            ("bandwidth_hz", bandwidth_hz),
            ("symbol_rate_hz", symbol_rate_hz),
            ("noise_temp_k", noise_temp_k),
            ("noise_figure", noise_figure),
            ("rx_gain", rx_gain),
            ("sinr_threshold", sinr_threshold),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(PhyError::Domain(format!("{name} must be strictly positive, got {v}")));
            }
        }
        Ok(budget)
    }

    /// Energy-per-symbol to noise-density ratio: `Es/N0 = (C/N)·(B/f_s)`.
    pub fn es_over_n0(&self) -> f64 {
        self.carrier_to_noise * self.bandwidth_hz / self.symbol_rate_hz
    }

    pub fn mos_dbm(&self) -> f64 {
        let watts = self.sinr_threshold
            * self.boltzmann_j_per_k
            * self.noise_temp_k
            * self.bandwidth_hz
            * self.noise_figure
            / self.rx_gain;
        10.0 * watts.log10() + 30.0
    }
}

/// Bit error probability at the given per-bit SNR (linear).
///
/// BPSK/QPSK: `Q(sqrt(2·γ_b))`. Square M-QAM:
/// `(4/log2 M)·(1 − 1/sqrt(M))·Q(sqrt(3·log2(M)·γ_b/(M−1)))`.
pub fn ber(snr_per_bit: f64, modulation: Modulation) -> f64 {
    let gamma = snr_per_bit.max(0.0);
    match modulation {
        Modulation::Bpsk | Modulation::Qpsk => q_function((2.0 * gamma).sqrt()),
        Modulation::Qam16 | Modulation::Qam64 => {
            let m = f64::from(modulation.order());
            let bits = m.log2();
            let coeff = (4.0 / bits) * (1.0 - 1.0 / m.sqrt());
            coeff * q_function((3.0 * bits * gamma / (m - 1.0)).sqrt())
        }
    }
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Why a frame was not delivered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureCause {
    None,
    BelowSensitivity,
    BelowSinrThreshold,
    BitErrors,
}

/// Outcome of one frame reception attempt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RxOutcome {
    pub rx_power_dbm: f64,
    pub noise_dbm: f64,
    pub sinr_db: f64,
    pub delivered: bool,
    pub failure_cause: FailureCause,
}

/// Deterministic per-frame transmission parameters; the stochastic parts
/// (noise, fading, bit errors) are drawn inside [`frame_success`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTxParams {
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub system_loss_db: f64,
    pub sensitivity_dbm: f64,
    pub sinr_threshold_db: f64,
    pub modulation: Modulation,
    pub phy_bitrate_bps: f64,
    pub psdu_bits: u64,
}

/// Decides one frame reception over the given channel at the given distance.
///
/// Draws one noise and one fading sample (block fading: one draw per frame),
/// gates on receiver sensitivity first, then on the SINR threshold; in
/// BER-based mode additionally samples a no-bit-error event with probability
/// `(1 − BER)^psdu_bits`.
pub fn frame_success(
    params: &FrameTxParams,
    channel: &ChannelConfig,
    distance_m: f64,
    mode: ReceptionMode,
    rng: &mut SimRng,
) -> Result<RxOutcome, PhyError> {
    let pl = channel_path_loss_db(channel, distance_m)?;
    let fading = channel.segment_at(distance_m).fading;
    Ok(frame_success_at(params, pl, fading, channel, mode, rng))
}

/// [`frame_success`] with the path loss and fading segment precomputed.
pub fn frame_success_at(
    params: &FrameTxParams,
    path_loss: f64,
    fading: FadingKind,
    channel: &ChannelConfig,
    mode: ReceptionMode,
    rng: &mut SimRng,
) -> RxOutcome {
    let noise = noise_sample_dbm(channel, rng);
    let fade = fading_gain_db(fading, rng);
    let rx = rx_power_dbm(
        params.tx_power_dbm,
        params.tx_gain_dbi,
        params.rx_gain_dbi,
        params.system_loss_db,
        path_loss,
        fade,
    );
    let sinr_db = rx - noise;

    let failure_cause = if rx < params.sensitivity_dbm {
        FailureCause::BelowSensitivity
    } else if sinr_db < params.sinr_threshold_db {
        FailureCause::BelowSinrThreshold
    } else if mode == ReceptionMode::BerBased {
        let snr_per_bit = 10f64.powf(sinr_db / 10.0) * channel.bandwidth_hz / params.phy_bitrate_bps;
        let p_bit = ber(snr_per_bit, params.modulation);
        let p_frame_ok = (1.0 - p_bit).powf(params.psdu_bits as f64);
        if rng.uniform_f64() < p_frame_ok {
            FailureCause::None
        } else {
            FailureCause::BitErrors
        }
    } else {
        FailureCause::None
    };

    RxOutcome {
        rx_power_dbm: rx,
        noise_dbm: noise,
        sinr_db,
        delivered: failure_cause == FailureCause::None,
        failure_cause,
    }
}
