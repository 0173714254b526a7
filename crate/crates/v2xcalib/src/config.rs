//! Constant tables and configuration types: the 802.11p MCS table, the LP/HP
//! transceiver profiles taken from the manufacturer-datasheet analysis, the
//! channel presets for the measured environments, and the scenario description
//! that fully determines a simulation run.
//!
//! All types here are immutable after construction and safe to share across
//! threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_MPS: f64 = 299_792_458.0;

/// Data subcarriers of a 10 MHz 802.11p OFDM channel.
pub const DATA_SUBCARRIERS: u32 = 48;

/// OFDM symbol duration at 10 MHz bandwidth, seconds.
pub const SYMBOL_DURATION_S: f64 = 8e-6;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("unknown channel preset `{0}` (expected one of anechoic, urban, suburban, rural)")]
    UnknownPreset(String),
    #[error("unknown MCS `{0}`")]
    UnknownMcs(String),
    #[error("unknown device `{0}` (expected LP or HP)")]
    UnknownDevice(String),
}

/// Subcarrier modulation of an MCS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub const ALL: [Modulation; 4] = [
        Modulation::Bpsk,
        Modulation::Qpsk,
        Modulation::Qam16,
        Modulation::Qam64,
    ];

    /// Coded bits carried per subcarrier.
    pub fn bits_per_subcarrier(self) -> u32 {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    /// Constellation size M.
    pub fn order(self) -> u32 {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qpsk => 4,
            Modulation::Qam16 => 16,
            Modulation::Qam64 => 64,
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Modulation::Bpsk => "BPSK",
            Modulation::Qpsk => "QPSK",
            Modulation::Qam16 => "16-QAM",
            Modulation::Qam64 => "64-QAM",
        };
        f.write_str(s)
    }
}

/// Convolutional coding rate, kept as an exact numerator/denominator pair so
/// that N_DBPS stays an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodingRate {
    Half,
    TwoThirds,
    ThreeQuarters,
}

impl CodingRate {
    pub fn numerator(self) -> u32 {
        match self {
            CodingRate::Half => 1,
            CodingRate::TwoThirds => 2,
            CodingRate::ThreeQuarters => 3,
        }
    }

    pub fn denominator(self) -> u32 {
        match self {
            CodingRate::Half => 2,
            CodingRate::TwoThirds => 3,
            CodingRate::ThreeQuarters => 4,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.numerator()) / f64::from(self.denominator())
    }
}

impl fmt::Display for CodingRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

/// Identifier of one of the eight 802.11p modulation-and-coding schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum McsId {
    #[serde(rename = "bpsk12")]
    Bpsk12,
    #[serde(rename = "bpsk34")]
    Bpsk34,
    #[serde(rename = "qpsk12")]
    Qpsk12,
    #[serde(rename = "qpsk34")]
    Qpsk34,
    #[serde(rename = "qam16_12")]
    Qam16Half,
    #[serde(rename = "qam16_34")]
    Qam16ThreeQuarters,
    #[serde(rename = "qam64_23")]
    Qam64TwoThirds,
    #[serde(rename = "qam64_34")]
    Qam64ThreeQuarters,
}

impl McsId {
    pub const ALL: [McsId; 8] = [
        McsId::Bpsk12,
        McsId::Bpsk34,
        McsId::Qpsk12,
        McsId::Qpsk34,
        McsId::Qam16Half,
        McsId::Qam16ThreeQuarters,
        McsId::Qam64TwoThirds,
        McsId::Qam64ThreeQuarters,
    ];

    pub fn profile(self) -> McsProfile {
        let (modulation, coding_rate, sinr_threshold_db) = match self {
            McsId::Bpsk12 => (Modulation::Bpsk, CodingRate::Half, 10.0),
            McsId::Bpsk34 => (Modulation::Bpsk, CodingRate::ThreeQuarters, 15.0),
            McsId::Qpsk12 => (Modulation::Qpsk, CodingRate::Half, 10.0),
            McsId::Qpsk34 => (Modulation::Qpsk, CodingRate::ThreeQuarters, 15.0),
            McsId::Qam16Half => (Modulation::Qam16, CodingRate::Half, 17.0),
            McsId::Qam16ThreeQuarters => (Modulation::Qam16, CodingRate::ThreeQuarters, 17.0),
            McsId::Qam64TwoThirds => (Modulation::Qam64, CodingRate::TwoThirds, 20.0),
            McsId::Qam64ThreeQuarters => (Modulation::Qam64, CodingRate::ThreeQuarters, 25.0),
        };
        McsProfile::new(self, modulation, coding_rate, sinr_threshold_db)
    }

    /// Canonical short token, as used in scenario files, CLI arguments, and
    /// trial-log metadata.
    pub fn token(self) -> &'static str {
        match self {
            McsId::Bpsk12 => "bpsk12",
            McsId::Bpsk34 => "bpsk34",
            McsId::Qpsk12 => "qpsk12",
            McsId::Qpsk34 => "qpsk34",
            McsId::Qam16Half => "qam16_12",
            McsId::Qam16ThreeQuarters => "qam16_34",
            McsId::Qam64TwoThirds => "qam64_23",
            McsId::Qam64ThreeQuarters => "qam64_34",
        }
    }
}

impl fmt::Display for McsId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for McsId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        McsId::ALL
            .into_iter()
            .find(|id| id.token() == lower)
            .ok_or_else(|| ConfigError::UnknownMcs(s.to_string()))
    }
}

/// One modulation-and-coding scheme with its derived PHY constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsProfile {
    pub id: McsId,
    pub modulation: Modulation,
    pub coding_rate: CodingRate,
    /// Data bits per OFDM symbol (N_DBPS).
    pub data_bits_per_symbol: u32,
    /// PHY bitrate in bits/second at 10 MHz bandwidth.
    pub phy_bitrate_bps: f64,
    /// Minimum SINR at which a frame can be processed, dB.
    pub sinr_threshold_db: f64,
}

impl McsProfile {
    fn new(id: McsId, modulation: Modulation, coding_rate: CodingRate, sinr_threshold_db: f64) -> Self {
        let coded_bits = DATA_SUBCARRIERS * modulation.bits_per_subcarrier();
        debug_assert_eq!((coded_bits * coding_rate.numerator()) % coding_rate.denominator(), 0);
        let data_bits_per_symbol = coded_bits * coding_rate.numerator() / coding_rate.denominator();
        McsProfile {
            id,
            modulation,
            coding_rate,
            data_bits_per_symbol,
            phy_bitrate_bps: f64::from(data_bits_per_symbol) / SYMBOL_DURATION_S,
            sinr_threshold_db,
        }
    }
}

/// The eight 802.11p MCS profiles, ordered by PHY bitrate.
pub fn builtin_mcs_table() -> Vec<McsProfile> {
    McsId::ALL.into_iter().map(McsId::profile).collect()
}

/// Transceiver class of a device profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DeviceKind {
    #[serde(rename = "LP", alias = "lp")]
    Lp,
    #[serde(rename = "HP", alias = "hp")]
    Hp,
}

impl DeviceKind {
    pub const ALL: [DeviceKind; 2] = [DeviceKind::Lp, DeviceKind::Hp];

    pub fn token(self) -> &'static str {
        match self {
            DeviceKind::Lp => "LP",
            DeviceKind::Hp => "HP",
        }
    }

    pub fn profile(self) -> DeviceProfile {
        match self {
            DeviceKind::Lp => DeviceProfile::lp(),
            DeviceKind::Hp => DeviceProfile::hp(),
        }
    }
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for DeviceKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LP" => Ok(DeviceKind::Lp),
            "HP" => Ok(DeviceKind::Hp),
            _ => Err(ConfigError::UnknownDevice(s.to_string())),
        }
    }
}

/// Per-modulation scalar table (TX power, RX sensitivity).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationTable {
    pub bpsk: f64,
    pub qpsk: f64,
    pub qam16: f64,
    pub qam64: f64,
}

impl ModulationTable {
    pub fn get(&self, m: Modulation) -> f64 {
        match m {
            Modulation::Bpsk => self.bpsk,
            Modulation::Qpsk => self.qpsk,
            Modulation::Qam16 => self.qam16,
            Modulation::Qam64 => self.qam64,
        }
    }

    pub fn values(&self) -> [f64; 4] {
        [self.bpsk, self.qpsk, self.qam16, self.qam64]
    }
}

/// Link-budget and MAC parameters of one transceiver class.
///
/// Both coding rates of a modulation share that modulation's TX power and
/// sensitivity row; the datasheets specify them per modulation only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceProfile {
    pub kind: DeviceKind,
    pub antenna_gain_dbi: f64,
    pub tx_power_dbm: ModulationTable,
    pub rx_sensitivity_dbm: ModulationTable,
    pub system_loss_db: f64,
    pub queue_capacity: usize,
    pub cw_min: u32,
    pub cw_max: u32,
    pub retry_limit: u32,
}

impl DeviceProfile {
    /// Low-power transceiver profile.
    pub fn lp() -> Self {
        DeviceProfile {
            kind: DeviceKind::Lp,
            antenna_gain_dbi: 7.0,
            tx_power_dbm: ModulationTable { bpsk: 27.0, qpsk: 26.0, qam16: 25.0, qam64: 24.0 },
            rx_sensitivity_dbm: ModulationTable { bpsk: -93.0, qpsk: -85.0, qam16: -80.0, qam64: -73.0 },
            system_loss_db: 3.0,
            queue_capacity: 50,
            cw_min: 15,
            cw_max: 1023,
            retry_limit: 4,
        }
    }

    /// High-power transceiver profile.
    pub fn hp() -> Self {
        DeviceProfile {
            kind: DeviceKind::Hp,
            antenna_gain_dbi: 9.0,
            tx_power_dbm: ModulationTable { bpsk: 28.0, qpsk: 27.0, qam16: 26.0, qam64: 24.0 },
            rx_sensitivity_dbm: ModulationTable { bpsk: -93.0, qpsk: -88.0, qam16: -84.0, qam64: -80.0 },
            system_loss_db: 3.0,
            queue_capacity: 50,
            cw_min: 15,
            cw_max: 1023,
            retry_limit: 4,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.queue_capacity == 0 {
            return Err(ConfigError::Invalid("queue_capacity must be positive".into()));
        }
        if self.cw_min == 0 || self.cw_min >= self.cw_max {
            return Err(ConfigError::Invalid(format!(
                "contention window must satisfy 0 < cw_min < cw_max, got [{}, {}]",
                self.cw_min, self.cw_max
            )));
        }
        if !(self.cw_min + 1).is_power_of_two() || !(self.cw_max + 1).is_power_of_two() {
            return Err(ConfigError::Invalid(
                "cw_min + 1 and cw_max + 1 must be powers of two".into(),
            ));
        }
        Ok(())
    }
}

/// The two datasheet-derived profiles, `(LP, HP)`.
pub fn device_profiles() -> (DeviceProfile, DeviceProfile) {
    (DeviceProfile::lp(), DeviceProfile::hp())
}

/// Small-scale fading model of a channel segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FadingKind {
    None,
    Rician { k_db: f64 },
    Rayleigh,
}

impl FadingKind {
    /// Ordering key used by calibration tie-breaks: Rayleigh is the K → 0
    /// limit, no fading the K → ∞ limit.
    pub fn sort_key(self) -> f64 {
        match self {
            FadingKind::Rayleigh => f64::NEG_INFINITY,
            FadingKind::Rician { k_db } => k_db,
            FadingKind::None => f64::INFINITY,
        }
    }
}

impl fmt::Display for FadingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingKind::None => write!(f, "none"),
            FadingKind::Rician { k_db } => write!(f, "rician(k={k_db} dB)"),
            FadingKind::Rayleigh => write!(f, "rayleigh"),
        }
    }
}

/// Path-loss exponent and fading pair for one distance range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSegment {
    pub path_loss_exponent: f64,
    pub fading: FadingKind,
}

fn default_noise_mean() -> f64 {
    -110.0
}
fn default_noise_sigma() -> f64 {
    3.0
}
fn default_carrier() -> f64 {
    5.9e9
}
fn default_bandwidth() -> f64 {
    10e6
}
fn default_prop_speed() -> f64 {
    SPEED_OF_LIGHT_MPS
}

/// Large-scale propagation, fading, and noise description of one environment.
///
/// `breakpoint_m` with `second_segment` models the suburban LOS→NLOS split:
/// up to the breakpoint the primary `(path_loss_exponent, fading)` pair
/// applies, beyond it the second segment takes over (path loss stays
/// continuous at the breakpoint).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub path_loss_exponent: f64,
    pub fading: FadingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoint_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_segment: Option<ChannelSegment>,
    #[serde(default = "default_noise_mean")]
    pub noise_mean_dbm: f64,
    #[serde(default = "default_noise_sigma")]
    pub noise_sigma_db: f64,
    #[serde(default = "default_carrier")]
    pub carrier_frequency_hz: f64,
    #[serde(default = "default_bandwidth")]
    pub bandwidth_hz: f64,
    #[serde(default = "default_prop_speed")]
    pub propagation_speed_mps: f64,
}

impl ChannelConfig {
    /// Single-segment channel with library-default noise and radio constants.
    pub fn simple(path_loss_exponent: f64, fading: FadingKind) -> Self {
        ChannelConfig {
            path_loss_exponent,
            fading,
            breakpoint_m: None,
            second_segment: None,
            noise_mean_dbm: default_noise_mean(),
            noise_sigma_db: default_noise_sigma(),
            carrier_frequency_hz: default_carrier(),
            bandwidth_hz: default_bandwidth(),
            propagation_speed_mps: default_prop_speed(),
        }
    }

    /// Exponent and fading in effect at the given distance.
    pub fn segment_at(&self, distance_m: f64) -> ChannelSegment {
        match (self.breakpoint_m, self.second_segment) {
            (Some(bp), Some(seg)) if distance_m > bp => seg,
            _ => ChannelSegment {
                path_loss_exponent: self.path_loss_exponent,
                fading: self.fading,
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.path_loss_exponent.is_finite() || self.path_loss_exponent <= 0.0 {
            return Err(ConfigError::Invalid("path_loss_exponent must be positive".into()));
        }
        if let FadingKind::Rician { k_db } = self.fading {
            if !k_db.is_finite() {
                return Err(ConfigError::Invalid("Rician k_db must be finite".into()));
            }
        }
        match (self.breakpoint_m, self.second_segment) {
            (None, None) => {}
            (Some(bp), Some(seg)) => {
                if !(bp > 0.0) {
                    return Err(ConfigError::Invalid("breakpoint_m must be positive".into()));
                }
                if !seg.path_loss_exponent.is_finite() || seg.path_loss_exponent <= 0.0 {
                    return Err(ConfigError::Invalid(
                        "second segment path_loss_exponent must be positive".into(),
                    ));
                }
            }
            _ => {
                return Err(ConfigError::Invalid(
                    "breakpoint_m and second_segment must be given together".into(),
                ));
            }
        }
        if !(self.noise_sigma_db >= 0.0) {
            return Err(ConfigError::Invalid("noise_sigma_db must be non-negative".into()));
        }
        if !(self.carrier_frequency_hz > 0.0) || !(self.bandwidth_hz > 0.0) {
            return Err(ConfigError::Invalid("carrier frequency and bandwidth must be positive".into()));
        }
        if !(self.propagation_speed_mps > 0.0) {
            return Err(ConfigError::Invalid("propagation_speed_mps must be positive".into()));
        }
        Ok(())
    }
}

/// Channel presets for the measured environments, keyed by name.
///
/// * `anechoic` — free space, no fading (ideal chamber conditions).
/// * `urban`    — α = 2.3, Rician K = 3.36 dB.
/// * `suburban` — α = 2.3, Rician K = 2.45 dB up to 50 m, then α = 2.5 Rayleigh.
/// * `rural`    — α = 2.2, Rician K = 8 dB.
pub fn scenario_presets() -> BTreeMap<String, ChannelConfig> {
    let mut map = BTreeMap::new();
    map.insert("anechoic".to_string(), ChannelConfig::simple(2.0, FadingKind::None));
    map.insert(
        "urban".to_string(),
        ChannelConfig::simple(2.3, FadingKind::Rician { k_db: 3.36 }),
    );
    let mut suburban = ChannelConfig::simple(2.3, FadingKind::Rician { k_db: 2.45 });
    suburban.breakpoint_m = Some(50.0);
    suburban.second_segment = Some(ChannelSegment {
        path_loss_exponent: 2.5,
        fading: FadingKind::Rayleigh,
    });
    map.insert("suburban".to_string(), suburban);
    map.insert("rural".to_string(), ChannelConfig::simple(2.2, FadingKind::Rician { k_db: 8.0 }));
    map
}

fn default_udp_payload() -> u32 {
    8192
}
fn default_mtu() -> u32 {
    1500
}
fn default_send_interval() -> f64 {
    0.025
}
fn default_beacon_bytes() -> u32 {
    500
}
fn default_beacon_interval() -> f64 {
    0.1
}
fn default_overhead() -> u32 {
    64
}

/// Traffic generation parameters.
///
/// `overhead_bytes` is the complete per-packet header stack of an
/// unfragmented UDP datagram: 24 B MAC header + 4 B FCS + 8 B LLC/SNAP +
/// 20 B IP + 8 B UDP = 64 B. During fragmentation the UDP header travels
/// inside the first fragment's IP payload, and the remaining
/// `overhead_bytes - 8` link+IP bytes are charged to every fragment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficConfig {
    #[serde(default = "default_udp_payload")]
    pub udp_payload_bytes: u32,
    #[serde(default = "default_mtu")]
    pub mtu_bytes: u32,
    #[serde(default = "default_send_interval")]
    pub send_interval_s: f64,
    #[serde(default = "default_beacon_bytes")]
    pub beacon_bytes: u32,
    #[serde(default = "default_beacon_interval")]
    pub beacon_interval_s: f64,
    #[serde(default = "default_overhead")]
    pub overhead_bytes: u32,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        TrafficConfig {
            udp_payload_bytes: default_udp_payload(),
            mtu_bytes: default_mtu(),
            send_interval_s: default_send_interval(),
            beacon_bytes: default_beacon_bytes(),
            beacon_interval_s: default_beacon_interval(),
            overhead_bytes: default_overhead(),
        }
    }
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.send_interval_s > 0.0) {
            return Err(ConfigError::Invalid("send_interval_s must be positive".into()));
        }
        if !(self.beacon_interval_s > 0.0) {
            return Err(ConfigError::Invalid("beacon_interval_s must be positive".into()));
        }
        if self.mtu_bytes < 576 {
            return Err(ConfigError::Invalid("mtu_bytes must be at least 576".into()));
        }
        if self.udp_payload_bytes == 0 {
            return Err(ConfigError::Invalid("udp_payload_bytes must be positive".into()));
        }
        if self.overhead_bytes < 36 {
            return Err(ConfigError::Invalid(
                "overhead_bytes must cover at least MAC+FCS+UDP headers (36 B)".into(),
            ));
        }
        Ok(())
    }
}

/// How frame reception is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReceptionMode {
    /// Delivered iff SINR is at or above the MCS threshold.
    #[default]
    Threshold,
    /// SINR threshold plus a sampled no-bit-error requirement from the
    /// Gaussian error-function BER curve.
    BerBased,
}

fn default_duration() -> f64 {
    10.0
}

/// Complete description of one OBU→RSU experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub distance_m: f64,
    pub tx_device: DeviceProfile,
    pub rx_device: DeviceProfile,
    pub mcs: McsId,
    pub channel: ChannelConfig,
    #[serde(default)]
    pub traffic: TrafficConfig,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub reception_mode: ReceptionMode,
}

impl ScenarioConfig {
    /// Scenario with both ends using the same builtin device profile.
    pub fn new(distance_m: f64, device: DeviceKind, mcs: McsId, channel: ChannelConfig) -> Self {
        ScenarioConfig {
            distance_m,
            tx_device: device.profile(),
            rx_device: device.profile(),
            mcs,
            channel,
            traffic: TrafficConfig::default(),
            duration_s: default_duration(),
            seed: 0,
            reception_mode: ReceptionMode::Threshold,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.distance_m > 0.0) || !self.distance_m.is_finite() {
            return Err(ConfigError::Invalid("distance_m must be positive".into()));
        }
        if !(self.duration_s > 0.0) || !self.duration_s.is_finite() {
            return Err(ConfigError::Invalid("duration_s must be positive".into()));
        }
        self.tx_device.validate()?;
        self.rx_device.validate()?;
        self.channel.validate()?;
        self.traffic.validate()?;
        Ok(())
    }
}
