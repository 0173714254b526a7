//! File interchange: scenario JSON files, trial/run record CSVs, run summary
//! JSON, boxplot report tables, and grid-specification parsing.
//!
//! Every emitted file is re-ingestible by this crate, field order is stable,
//! and floats are written with 9 significant digits, so identical inputs and
//! seeds produce byte-identical outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calib::ConditionKey;
use crate::config::{
    scenario_presets, ChannelConfig, ConfigError, DeviceKind, DeviceProfile, McsId, ReceptionMode,
    ScenarioConfig, TrafficConfig,
};
use crate::sim::{RunMetrics, RxRecord};
use crate::stats::{boxplot, median, BoxplotSummary};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("bad grid `{spec}`: {msg}")]
    Grid { spec: String, msg: String },
}

fn io_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::Io { path: path.display().to_string(), source }
}

fn format_err(path: &Path, msg: impl Into<String>) -> IoError {
    IoError::Format { path: path.display().to_string(), msg: msg.into() }
}

/// Rounds to 9 significant decimal digits.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("scientific notation round-trips")
}

/// Formats a float with 9 significant digits in plain decimal notation.
pub fn fmt_sig9(x: f64) -> String {
    format!("{}", round_sig9(x))
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

/// Device given by name (`"LP"`, `"HP"`) or as a full inline profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum DeviceRef {
    Named(DeviceKind),
    Inline(DeviceProfile),
}

impl DeviceRef {
    fn resolve(self) -> DeviceProfile {
        match self {
            DeviceRef::Named(kind) => kind.profile(),
            DeviceRef::Inline(profile) => profile,
        }
    }

    fn from_profile(profile: &DeviceProfile) -> Self {
        if *profile == profile.kind.profile() {
            DeviceRef::Named(profile.kind)
        } else {
            DeviceRef::Inline(*profile)
        }
    }
}

/// Channel given by preset name or inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ChannelRef {
    Preset(String),
    Inline(ChannelConfig),
}

impl ChannelRef {
    fn resolve(self) -> Result<ChannelConfig, ConfigError> {
        match self {
            ChannelRef::Preset(name) => scenario_presets()
                .get(&name)
                .copied()
                .ok_or(ConfigError::UnknownPreset(name)),
            ChannelRef::Inline(cfg) => Ok(cfg),
        }
    }

    fn from_config(cfg: &ChannelConfig) -> Self {
        for (name, preset) in scenario_presets() {
            if *cfg == preset {
                return ChannelRef::Preset(name);
            }
        }
        ChannelRef::Inline(*cfg)
    }
}

fn default_duration() -> f64 {
    10.0
}

/// On-disk scenario schema. Unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioSpec {
    distance_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    device: Option<DeviceRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tx_device: Option<DeviceRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rx_device: Option<DeviceRef>,
    mcs: McsId,
    channel: ChannelRef,
    #[serde(default)]
    traffic: TrafficConfig,
    #[serde(default = "default_duration")]
    duration_s: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    reception_mode: ReceptionMode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenario: ScenarioSpec,
}

impl ScenarioSpec {
    fn into_config(self, path: &Path) -> Result<ScenarioConfig, IoError> {
        let (tx, rx) = match (self.device, self.tx_device, self.rx_device) {
            (Some(d), None, None) => {
                let p = d.resolve();
                (p, p)
            }
            (None, Some(tx), Some(rx)) => (tx.resolve(), rx.resolve()),
            _ => {
                return Err(format_err(
                    path,
                    "give either `device` or both `tx_device` and `rx_device`",
                ))
            }
        };
        let config = ScenarioConfig {
            distance_m: self.distance_m,
            tx_device: tx,
            rx_device: rx,
            mcs: self.mcs,
            channel: self.channel.resolve()?,
            traffic: self.traffic,
            duration_s: self.duration_s,
            seed: self.seed,
            reception_mode: self.reception_mode,
        };
        config.validate()?;
        Ok(config)
    }

    fn from_config(sc: &ScenarioConfig) -> Self {
        let same = sc.tx_device == sc.rx_device;
        ScenarioSpec {
            distance_m: sc.distance_m,
            device: same.then(|| DeviceRef::from_profile(&sc.tx_device)),
            tx_device: (!same).then(|| DeviceRef::from_profile(&sc.tx_device)),
            rx_device: (!same).then(|| DeviceRef::from_profile(&sc.rx_device)),
            mcs: sc.mcs,
            channel: ChannelRef::from_config(&sc.channel),
            traffic: sc.traffic,
            duration_s: sc.duration_s,
            seed: sc.seed,
            reception_mode: sc.reception_mode,
        }
    }
}

/// Loads and validates a scenario file; the second element is the file stem,
/// used to name outputs.
pub fn load_scenario(path: &Path) -> Result<(ScenarioConfig, String), IoError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(|source| IoError::Json { path: path.display().to_string(), source })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string());
    Ok((file.scenario.into_config(path)?, name))
}

pub fn save_scenario(path: &Path, sc: &ScenarioConfig) -> Result<(), IoError> {
    let file = ScenarioFile { scenario: ScenarioSpec::from_config(sc) };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|source| IoError::Json { path: path.display().to_string(), source })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

// ---------------------------------------------------------------------------
// Record CSV (trial logs and simulation outputs share the format)
// ---------------------------------------------------------------------------

const CSV_HEADER: &str = "send_time_s,recv_time_s,seq,payload_bytes";

/// Metadata identifying one run log.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub device: DeviceKind,
    pub scenario: String,
    pub distance_m: f64,
    pub mcs: McsId,
    pub run: String,
    pub duration_s: Option<f64>,
}

impl RunMeta {
    pub fn condition_key(&self) -> String {
        ConditionKey { device: self.device, mcs: self.mcs, distance_m: self.distance_m }.to_string()
    }
}

/// Parsed and validated trial (or re-ingested simulation) log.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog {
    pub meta: RunMeta,
    pub records: Vec<RxRecord>,
}

/// Parses a record CSV: `# key=value` metadata lines, the exact header, then
/// one record per line, sorted by receive time with unique sequence numbers.
pub fn parse_trial_csv(path: &Path) -> Result<TrialLog, IoError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut device = None;
    let mut scenario = String::new();
    let mut distance_m = None;
    let mut mcs = None;
    let mut run = String::new();
    let mut duration_s = None;
    let mut header_seen = false;
    let mut records: Vec<RxRecord> = Vec::new();
    let mut seen_seq = std::collections::BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if header_seen {
                return Err(format_err(path, format!("metadata after header at line {line_no}")));
            }
            let comment = comment.trim();
            let Some((key, value)) = comment.split_once('=') else {
                continue; // plain comment
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "device" => {
                    device = Some(value.parse::<DeviceKind>().map_err(|e| {
                        format_err(path, format!("{e} at line {line_no}"))
                    })?)
                }
                "scenario" => scenario = value.to_string(),
                "distance_m" => {
                    let d: f64 = value
                        .parse()
                        .map_err(|_| format_err(path, format!("bad distance_m `{value}` at line {line_no}")))?;
                    distance_m = Some(d);
                }
                "mcs" => {
                    mcs = Some(value.parse::<McsId>().map_err(|e| {
                        format_err(path, format!("{e} at line {line_no}"))
                    })?)
                }
                "run" => run = value.to_string(),
                "duration_s" => {
                    let d: f64 = value
                        .parse()
                        .map_err(|_| format_err(path, format!("bad duration_s `{value}` at line {line_no}")))?;
                    duration_s = Some(d);
                }
                other => {
                    return Err(format_err(
                        path,
                        format!("unknown metadata key `{other}` at line {line_no}"),
                    ))
                }
            }
            continue;
        }
        if !header_seen {
            if line != CSV_HEADER {
                return Err(format_err(
                    path,
                    format!("missing header `{CSV_HEADER}` at line {line_no}, got `{line}`"),
                ));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(format_err(
                path,
                format!("expected 4 fields, got {} at line {line_no}", fields.len()),
            ));
        }
        let send_time_s: f64 = fields[0]
            .parse()
            .map_err(|_| format_err(path, format!("bad send_time_s `{}` at line {line_no}", fields[0])))?;
        let recv_time_s: f64 = fields[1]
            .parse()
            .map_err(|_| format_err(path, format!("bad recv_time_s `{}` at line {line_no}", fields[1])))?;
        let seq: u64 = fields[2]
            .parse()
            .map_err(|_| format_err(path, format!("bad seq `{}` at line {line_no}", fields[2])))?;
        let payload_bytes: u32 = fields[3]
            .parse()
            .map_err(|_| format_err(path, format!("bad payload_bytes `{}` at line {line_no}", fields[3])))?;
        if !send_time_s.is_finite() || !recv_time_s.is_finite() || send_time_s < 0.0 || recv_time_s < 0.0
        {
            return Err(format_err(path, format!("negative or non-finite time at line {line_no}")));
        }
        if let Some(prev) = records.last() {
            if recv_time_s < prev.recv_time_s {
                return Err(format_err(path, format!("recv_time_s decreases at line {line_no}")));
            }
        }
        if !seen_seq.insert(seq) {
            return Err(format_err(path, format!("duplicate seq {seq} at line {line_no}")));
        }
        records.push(RxRecord { send_time_s, recv_time_s, seq, payload_bytes });
    }

    if !header_seen {
        return Err(format_err(path, format!("missing header `{CSV_HEADER}`")));
    }
    let meta = RunMeta {
        device: device.ok_or_else(|| format_err(path, "missing metadata key `device`"))?,
        scenario,
        distance_m: distance_m.ok_or_else(|| format_err(path, "missing metadata key `distance_m`"))?,
        mcs: mcs.ok_or_else(|| format_err(path, "missing metadata key `mcs`"))?,
        run,
        duration_s,
    };
    Ok(TrialLog { meta, records })
}

/// Writes a record CSV in the exact format [`parse_trial_csv`] ingests.
pub fn write_records_csv(path: &Path, meta: &RunMeta, records: &[RxRecord]) -> Result<(), IoError> {
    let mut out = String::new();
    out.push_str(&format!("# device={}\n", meta.device.token()));
    out.push_str(&format!("# scenario={}\n", meta.scenario));
    out.push_str(&format!("# distance_m={}\n", fmt_sig9(meta.distance_m)));
    out.push_str(&format!("# mcs={}\n", meta.mcs.token()));
    out.push_str(&format!("# run={}\n", meta.run));
    if let Some(d) = meta.duration_s {
        out.push_str(&format!("# duration_s={}\n", fmt_sig9(d)));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig9(r.send_time_s),
            fmt_sig9(r.recv_time_s),
            r.seq,
            r.payload_bytes
        ));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

// ---------------------------------------------------------------------------
// Run summaries
// ---------------------------------------------------------------------------

/// JSON run summary: counters, throughput bins, and jitter digest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub device: String,
    pub mcs: String,
    pub distance_m: f64,
    pub seed: u64,
    pub duration_s: f64,
    pub reception_mode: ReceptionMode,
    pub throughput_bps: f64,
    pub throughput_samples_bps: Vec<f64>,
    pub jitter_median_s: Option<f64>,
    pub jitter_final_s: Option<f64>,
    pub datagrams_generated: u64,
    pub datagrams_received: u64,
    pub datagrams_fragment_lost: u64,
    pub datagrams_pending: u64,
    pub queue_drops: u64,
    pub channel_losses: u64,
    pub mac_discards: u64,
    pub ack_losses: u64,
    pub beacons_generated: u64,
    pub beacons_delivered: u64,
    pub queue_peak: u64,
}

impl RunSummary {
    pub fn new(name: &str, sc: &ScenarioConfig, m: &RunMetrics) -> Self {
        RunSummary {
            scenario: name.to_string(),
            device: sc.tx_device.kind.token().to_string(),
            mcs: sc.mcs.token().to_string(),
            distance_m: round_sig9(sc.distance_m),
            seed: sc.seed,
            duration_s: round_sig9(m.duration_s),
            reception_mode: sc.reception_mode,
            throughput_bps: round_sig9(m.throughput_bps()),
            throughput_samples_bps: m.throughput_samples_bps.iter().map(|&b| round_sig9(b)).collect(),
            jitter_median_s: median(&m.jitter_series_s).ok().map(round_sig9),
            jitter_final_s: m.final_jitter_s().map(round_sig9),
            datagrams_generated: m.datagrams_generated,
            datagrams_received: m.datagrams_received,
            datagrams_fragment_lost: m.datagrams_fragment_lost,
            datagrams_pending: m.datagrams_pending,
            queue_drops: m.queue_drops,
            channel_losses: m.channel_losses,
            mac_discards: m.mac_discards,
            ack_losses: m.ack_losses,
            beacons_generated: m.beacons_generated,
            beacons_delivered: m.beacons_delivered,
            queue_peak: m.queue_peak,
        }
    }
}

pub fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|source| IoError::Json { path: path.display().to_string(), source })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Writes `<name>_seed<seed>.csv` and `.json` for one run; returns the paths.
pub fn write_run_outputs(
    dir: &Path,
    name: &str,
    sc: &ScenarioConfig,
    metrics: &RunMetrics,
) -> Result<(PathBuf, PathBuf), IoError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let stem = format!("{name}_seed{}", sc.seed);
    let meta = RunMeta {
        device: sc.tx_device.kind,
        scenario: name.to_string(),
        distance_m: sc.distance_m,
        mcs: sc.mcs,
        run: format!("seed{}", sc.seed),
        duration_s: Some(sc.duration_s),
    };
    let csv_path = dir.join(format!("{stem}.csv"));
    write_records_csv(&csv_path, &meta, &metrics.rx_records)?;
    let json_path = dir.join(format!("{stem}.json"));
    write_json_pretty(&json_path, &RunSummary::new(name, sc, metrics))?;
    Ok((csv_path, json_path))
}

// ---------------------------------------------------------------------------
// Condition sample pools and reports
// ---------------------------------------------------------------------------

/// Which per-run sample population feeds comparisons and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Throughput,
    Jitter,
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "throughput" => Ok(Metric::Throughput),
            "jitter" => Ok(Metric::Jitter),
            other => Err(format!("unknown metric `{other}` (expected throughput or jitter)")),
        }
    }
}

/// Per-run samples of a metric, recomputed from the record stream so that
/// trial logs and re-ingested simulation outputs reduce identically.
pub fn samples_from_log(log: &TrialLog, metric: Metric) -> Vec<f64> {
    match metric {
        Metric::Throughput => {
            let duration = log
                .meta
                .duration_s
                .unwrap_or_else(|| log.records.last().map(|r| r.recv_time_s.ceil()).unwrap_or(0.0));
            let n_bins = duration.ceil().max(0.0) as usize;
            if n_bins == 0 {
                return Vec::new();
            }
            let mut bins = vec![0.0; n_bins];
            for r in &log.records {
                let idx = (r.recv_time_s as usize).min(n_bins - 1);
                bins[idx] += 8.0 * f64::from(r.payload_bytes);
            }
            bins
        }
        Metric::Jitter => {
            let pairs: Vec<(f64, f64)> =
                log.records.iter().map(|r| (r.send_time_s, r.recv_time_s)).collect();
            if pairs.len() < 2 {
                return Vec::new();
            }
            crate::stats::jitter_rfc1889(&pairs).expect("two or more records")
        }
    }
}

/// Reads every `*.csv` in a directory (sorted by file name) and pools metric
/// samples by condition key.
pub fn collect_condition_samples(
    dir: &Path,
    metric: Metric,
) -> Result<BTreeMap<String, Vec<f64>>, IoError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format_err(dir, "no .csv files found"));
    }
    let mut pools: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for file in files {
        let log = parse_trial_csv(&file)?;
        let samples = samples_from_log(&log, metric);
        pools.entry(log.meta.condition_key()).or_default().extend(samples);
    }
    Ok(pools)
}

/// Boxplot digest of one condition, with floats rounded for stable output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReportRow {
    pub condition: String,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub n_outliers: usize,
    pub n: usize,
}

impl ConditionReportRow {
    fn new(condition: &str, b: &BoxplotSummary) -> Self {
        ConditionReportRow {
            condition: condition.to_string(),
            q1: round_sig9(b.q1),
            median: round_sig9(b.median),
            q3: round_sig9(b.q3),
            whisker_low: round_sig9(b.whisker_low),
            whisker_high: round_sig9(b.whisker_high),
            n_outliers: b.outliers.len(),
            n: b.n,
        }
    }
}

/// Boxplot rows per condition from a results directory. Conditions whose
/// sample pool is empty are skipped.
pub fn condition_report(dir: &Path, metric: Metric) -> Result<Vec<ConditionReportRow>, IoError> {
    let pools = collect_condition_samples(dir, metric)?;
    let mut rows = Vec::new();
    for (condition, samples) in &pools {
        if samples.is_empty() {
            continue;
        }
        let b = boxplot(samples)
            .map_err(|e| format_err(dir, format!("condition {condition}: {e}")))?;
        rows.push(ConditionReportRow::new(condition, &b));
    }
    Ok(rows)
}

pub fn report_rows_to_csv(rows: &[ConditionReportRow]) -> String {
    let mut out = String::from("condition,q1,median,q3,whisker_low,whisker_high,n_outliers,n\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.condition,
            fmt_sig9(r.q1),
            fmt_sig9(r.median),
            fmt_sig9(r.q3),
            fmt_sig9(r.whisker_low),
            fmt_sig9(r.whisker_high),
            r.n_outliers,
            r.n
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Grid specifications
// ---------------------------------------------------------------------------

/// Parses an inclusive `start:stop:step` range, e.g. `2.0:2.6:0.1` → 7 values.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, IoError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let err = |msg: &str| IoError::Grid { spec: spec.to_string(), msg: msg.to_string() };
    if parts.len() != 3 {
        return Err(err("expected start:stop:step"));
    }
    let start: f64 = parts[0].parse().map_err(|_| err("bad start"))?;
    let stop: f64 = parts[1].parse().map_err(|_| err("bad stop"))?;
    let step: f64 = parts[2].parse().map_err(|_| err("bad step"))?;
    if !(step > 0.0) {
        return Err(err("step must be positive"));
    }
    if stop < start {
        return Err(err("stop must not be below start"));
    }
    let n = ((stop - start) / step).round() as usize;
    if ((start + n as f64 * step) - stop).abs() > 1e-9 * stop.abs().max(1.0) {
        return Err(err("stop is not start plus a whole number of steps"));
    }
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}
