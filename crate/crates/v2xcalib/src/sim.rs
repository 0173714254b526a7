//! Deterministic discrete-event engine for one OBU→RSU link: periodic UDP
//! datagrams are fragmented into MTU-sized IP fragments, each fragment is one
//! unicast MAC frame (ACK + retries), 500-byte broadcast beacons share the
//! same FIFO queue, and every reception is decided by the PHY channel model.
//!
//! A run is strictly single-threaded and bit-reproducible for a fixed
//! `(scenario, seed)` pair. Sweeps run independent scenarios, optionally in
//! parallel; each run owns its generator, so results are order-independent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, DeviceKind, McsId, Modulation, ScenarioConfig, TrafficConfig};
use crate::mac::{
    draw_backoff, medium_access_delay, on_tx_failure, BackoffState, EnqueueOutcome, MacQueue,
    MacTimingConstants, TxFailureOutcome,
};
use crate::phy::{frame_success_at, FrameTxParams, PhyTimingConstants};
use crate::rng::SimRng;
use crate::stats::jitter_rfc1889;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("saturation tuning failed: {0}")]
    Tuning(String),
    #[error("sweep needs {0}")]
    EmptySweep(&'static str),
}

/// One fully reassembled transport-layer datagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RxRecord {
    pub send_time_s: f64,
    pub recv_time_s: f64,
    pub seq: u64,
    pub payload_bytes: u32,
}

/// Everything measured over one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub duration_s: f64,
    pub bin_width_s: f64,
    /// Completed datagrams, ordered by receive time.
    pub rx_records: Vec<RxRecord>,
    /// Received payload bits per bin interval, in bits/second.
    pub throughput_samples_bps: Vec<f64>,
    /// RFC 1889 jitter estimate after each datagram past the first.
    pub jitter_series_s: Vec<f64>,
    pub datagrams_generated: u64,
    pub datagrams_received: u64,
    /// Datagrams that definitively lost at least one fragment.
    pub datagrams_fragment_lost: u64,
    /// Datagrams still queued or in flight when the run ended.
    pub datagrams_pending: u64,
    pub fragments_generated: u64,
    pub fragments_delivered: u64,
    pub fragments_lost: u64,
    pub fragments_pending: u64,
    /// Enqueue refusals (fragments and beacons).
    pub queue_drops: u64,
    /// Data transmission attempts not delivered by the channel.
    pub channel_losses: u64,
    /// Frames discarded after exhausting the retry limit.
    pub mac_discards: u64,
    /// ACK frames lost on the reverse link (BER-based mode only).
    pub ack_losses: u64,
    pub beacons_generated: u64,
    pub beacons_delivered: u64,
    /// Highest queue occupancy observed.
    pub queue_peak: u64,
}

impl RunMetrics {
    /// Mean transport throughput over the whole run, bits/second.
    pub fn throughput_bps(&self) -> f64 {
        let bits: u64 = self.rx_records.iter().map(|r| 8 * u64::from(r.payload_bytes)).sum();
        bits as f64 / self.duration_s
    }

    pub fn final_jitter_s(&self) -> Option<f64> {
        self.jitter_series_s.last().copied()
    }
}

/// Metric collection knobs that are not part of the scenario contract.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Throughput bin width, seconds.
    pub bin_width_s: f64,
    /// Datagrams completing before this time are excluded from the metrics.
    pub warmup_trim_s: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { bin_width_s: 1.0, warmup_trim_s: 0.0 }
    }
}

/// IP payload bytes of each fragment of one UDP datagram.
///
/// The datagram is the UDP payload plus the 8-byte UDP header; every
/// fragment except the last carries the largest multiple of 8 bytes that
/// fits the MTU after the 20-byte IP header.
pub fn fragment_ip_payloads(traffic: &TrafficConfig) -> Vec<u32> {
    let total = traffic.udp_payload_bytes + 8;
    let cap = (traffic.mtu_bytes - 20) / 8 * 8;
    let mut sizes = Vec::new();
    let mut remaining = total;
    while remaining > cap {
        sizes.push(cap);
        remaining -= cap;
    }
    sizes.push(remaining);
    sizes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    GenerateDatagram,
    GenerateBeacon,
    TxStart,
    TxEnd,
    AckTimeout,
    RunEnd,
}

impl EventKind {
    /// RunEnd yields to same-time events so that a generation tick landing
    /// exactly on the end time still counts as generated.
    fn tie_rank(self) -> u8 {
        match self {
            EventKind::RunEnd => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then_with(|| self.kind.tie_rank().cmp(&other.kind.tie_rank()))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

#[derive(Debug, Clone, Copy)]
enum Frame {
    Data { dgram: usize, frag: usize },
    Beacon,
}

#[derive(Debug)]
struct DatagramState {
    send_time: f64,
    seq: u64,
    frag_delivered: Vec<bool>,
    frag_gone: Vec<bool>,
    delivered_count: usize,
    gone_any: bool,
    completed: bool,
}

impl DatagramState {
    fn new(send_time: f64, seq: u64, frags: usize) -> Self {
        DatagramState {
            send_time,
            seq,
            frag_delivered: vec![false; frags],
            frag_gone: vec![false; frags],
            delivered_count: 0,
            gone_any: false,
            completed: false,
        }
    }
}

struct Engine<'a> {
    sc: &'a ScenarioConfig,
    opts: RunOptions,
    mac_t: MacTimingConstants,
    rng: SimRng,
    heap: BinaryHeap<std::cmp::Reverse<Event>>,
    event_seq: u64,
    queue: MacQueue<Frame>,
    backoff: BackoffState,
    mac_pending: bool,
    mac_ready_at: f64,
    // Per-scenario constants.
    frag_psdus: Vec<u32>,
    frag_airtimes: Vec<f64>,
    beacon_airtime: f64,
    ack_airtime: f64,
    ack_timeout: f64,
    prop_delay: f64,
    path_loss: f64,
    fading: crate::config::FadingKind,
    data_params: FrameTxParams,
    ack_params: FrameTxParams,
    // Generation chains.
    next_datagram: u64,
    next_beacon: u64,
    // Accounting.
    datagrams: Vec<DatagramState>,
    records: Vec<RxRecord>,
    fragments_delivered: u64,
    fragments_lost: u64,
    channel_losses: u64,
    mac_discards: u64,
    ack_losses: u64,
    beacons_generated: u64,
    beacons_delivered: u64,
    queue_peak: usize,
}

impl<'a> Engine<'a> {
    fn new(sc: &'a ScenarioConfig, opts: RunOptions) -> Result<Self, SimError> {
        sc.validate()?;
        let mac_t = MacTimingConstants::IEEE_802_11P_10MHZ;
        let phy_t = PhyTimingConstants::IEEE_802_11P_10MHZ;
        let mcs = sc.mcs.profile();
        let link_overhead = sc.traffic.overhead_bytes - 8;
        let frag_psdus: Vec<u32> =
            fragment_ip_payloads(&sc.traffic).iter().map(|p| p + link_overhead).collect();
        let frag_airtimes: Vec<f64> = frag_psdus
            .iter()
            .map(|&b| crate::phy::frame_airtime_with(&phy_t, b, mcs.data_bits_per_symbol))
            .collect();
        let beacon_airtime =
            crate::phy::frame_airtime_with(&phy_t, sc.traffic.beacon_bytes, mcs.data_bits_per_symbol);
        let ack_mcs = McsId::Bpsk12.profile();
        let ack_airtime =
            crate::phy::frame_airtime_with(&phy_t, mac_t.ack_psdu_bytes, ack_mcs.data_bits_per_symbol);
        let prop_delay = sc.distance_m / sc.channel.propagation_speed_mps;
        let path_loss = crate::phy::channel_path_loss_db(&sc.channel, sc.distance_m)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let fading = sc.channel.segment_at(sc.distance_m).fading;

        let data_params = FrameTxParams {
            tx_power_dbm: sc.tx_device.tx_power_dbm.get(mcs.modulation),
            tx_gain_dbi: sc.tx_device.antenna_gain_dbi,
            rx_gain_dbi: sc.rx_device.antenna_gain_dbi,
            system_loss_db: sc.tx_device.system_loss_db,
            sensitivity_dbm: sc.rx_device.rx_sensitivity_dbm.get(mcs.modulation),
            sinr_threshold_db: mcs.sinr_threshold_db,
            modulation: mcs.modulation,
            phy_bitrate_bps: mcs.phy_bitrate_bps,
            psdu_bits: 0,
        };
        // ACKs travel RSU→OBU at the lowest mandatory rate.
        let ack_params = FrameTxParams {
            tx_power_dbm: sc.rx_device.tx_power_dbm.get(Modulation::Bpsk),
            tx_gain_dbi: sc.rx_device.antenna_gain_dbi,
            rx_gain_dbi: sc.tx_device.antenna_gain_dbi,
            system_loss_db: sc.rx_device.system_loss_db,
            sensitivity_dbm: sc.tx_device.rx_sensitivity_dbm.get(Modulation::Bpsk),
            sinr_threshold_db: ack_mcs.sinr_threshold_db,
            modulation: ack_mcs.modulation,
            phy_bitrate_bps: ack_mcs.phy_bitrate_bps,
            psdu_bits: u64::from(mac_t.ack_psdu_bytes) * 8,
        };

        Ok(Engine {
            sc,
            opts,
            mac_t,
            rng: SimRng::from_seed(sc.seed),
            heap: BinaryHeap::new(),
            event_seq: 0,
            queue: MacQueue::new(sc.tx_device.queue_capacity),
            backoff: BackoffState::fresh(sc.tx_device.cw_min),
            mac_pending: false,
            mac_ready_at: 0.0,
            frag_psdus,
            frag_airtimes,
            beacon_airtime,
            ack_airtime,
            ack_timeout: mac_t.sifs_s + ack_airtime + mac_t.slot_s + 2.0 * prop_delay,
            prop_delay,
            path_loss,
            fading,
            data_params,
            ack_params,
            next_datagram: 1,
            next_beacon: 1,
            datagrams: Vec::new(),
            records: Vec::new(),
            fragments_delivered: 0,
            fragments_lost: 0,
            channel_losses: 0,
            mac_discards: 0,
            ack_losses: 0,
            beacons_generated: 0,
            beacons_delivered: 0,
            queue_peak: 0,
        })
    }

    fn schedule(&mut self, time: f64, kind: EventKind) {
        let seq = self.event_seq;
        self.event_seq += 1;
        self.heap.push(std::cmp::Reverse(Event { time, seq, kind }));
    }

    fn maybe_start_access(&mut self, now: f64) {
        if self.mac_pending || self.queue.is_empty() {
            return;
        }
        self.mac_pending = true;
        self.backoff.slots_remaining = draw_backoff(self.backoff.cw_current, &mut self.rng);
        let start = medium_access_delay(&self.backoff, &[], now.max(self.mac_ready_at), &self.mac_t);
        self.schedule(start, EventKind::TxStart);
    }

    fn head_airtime(&self) -> f64 {
        match *self.queue.front().expect("MAC chain requires a head frame") {
            Frame::Data { frag, .. } => self.frag_airtimes[frag],
            Frame::Beacon => self.beacon_airtime,
        }
    }

    /// Head frame leaves the queue; the MAC becomes ready at `ready_at`.
    fn release_head(&mut self, now: f64, ready_at: f64) {
        self.queue.pop_front();
        self.backoff = BackoffState::fresh(self.sc.tx_device.cw_min);
        self.mac_pending = false;
        self.mac_ready_at = ready_at;
        self.maybe_start_access(now);
    }

    fn on_generate_datagram(&mut self, t: f64) {
        let dgram = self.datagrams.len();
        let frags = self.frag_psdus.len();
        let mut state = DatagramState::new(t, dgram as u64 + 1, frags);
        for frag in 0..frags {
            if self.queue.enqueue(Frame::Data { dgram, frag }) == EnqueueOutcome::Dropped {
                state.frag_gone[frag] = true;
                state.gone_any = true;
                self.fragments_lost += 1;
            }
        }
        self.queue_peak = self.queue_peak.max(self.queue.len());
        self.datagrams.push(state);
        self.next_datagram += 1;
        let t_next = self.next_datagram as f64 * self.sc.traffic.send_interval_s;
        if t_next <= self.sc.duration_s {
            self.schedule(t_next, EventKind::GenerateDatagram);
        }
        self.maybe_start_access(t);
    }

    fn on_generate_beacon(&mut self, t: f64) {
        self.beacons_generated += 1;
        self.queue.enqueue(Frame::Beacon);
        self.queue_peak = self.queue_peak.max(self.queue.len());
        self.next_beacon += 1;
        let t_next = self.next_beacon as f64 * self.sc.traffic.beacon_interval_s;
        if t_next <= self.sc.duration_s {
            self.schedule(t_next, EventKind::GenerateBeacon);
        }
        self.maybe_start_access(t);
    }

    fn on_tx_end(&mut self, t: f64) {
        let frame = *self.queue.front().expect("TxEnd requires a head frame");
        let rx_time = t + self.prop_delay;
        match frame {
            Frame::Beacon => {
                let mut params = self.data_params;
                params.psdu_bits = u64::from(self.sc.traffic.beacon_bytes) * 8;
                let outcome = frame_success_at(
                    &params,
                    self.path_loss,
                    self.fading,
                    &self.sc.channel,
                    self.sc.reception_mode,
                    &mut self.rng,
                );
                if outcome.delivered && rx_time < self.sc.duration_s {
                    self.beacons_delivered += 1;
                }
                // Broadcast: no ACK, no retry; the medium frees at TX end.
                self.release_head(t, t);
            }
            Frame::Data { dgram, frag } => {
                let mut params = self.data_params;
                params.psdu_bits = u64::from(self.frag_psdus[frag]) * 8;
                let outcome = frame_success_at(
                    &params,
                    self.path_loss,
                    self.fading,
                    &self.sc.channel,
                    self.sc.reception_mode,
                    &mut self.rng,
                );
                if outcome.delivered && rx_time < self.sc.duration_s {
                    self.note_fragment_delivery(dgram, frag, rx_time);
                    let ack_ok = match self.sc.reception_mode {
                        // Same SINR on the symmetric link: a deliverable data
                        // frame implies a deliverable ACK in threshold mode.
                        crate::config::ReceptionMode::Threshold => true,
                        crate::config::ReceptionMode::BerBased => {
                            frame_success_at(
                                &self.ack_params,
                                self.path_loss,
                                self.fading,
                                &self.sc.channel,
                                self.sc.reception_mode,
                                &mut self.rng,
                            )
                            .delivered
                        }
                    };
                    if ack_ok {
                        let ack_done =
                            rx_time + self.mac_t.sifs_s + self.ack_airtime + self.prop_delay;
                        self.release_head(t, ack_done);
                    } else {
                        self.ack_losses += 1;
                        self.schedule(t + self.ack_timeout, EventKind::AckTimeout);
                    }
                } else if outcome.delivered {
                    // Delivered past the run horizon: the datagram stays pending.
                    self.release_head(t, rx_time);
                } else {
                    self.channel_losses += 1;
                    self.schedule(t + self.ack_timeout, EventKind::AckTimeout);
                }
            }
        }
    }

    fn note_fragment_delivery(&mut self, dgram: usize, frag: usize, rx_time: f64) {
        let state = &mut self.datagrams[dgram];
        if state.frag_delivered[frag] {
            return; // retransmission of an already-received fragment
        }
        state.frag_delivered[frag] = true;
        state.delivered_count += 1;
        self.fragments_delivered += 1;
        if state.delivered_count == state.frag_delivered.len() && !state.gone_any {
            state.completed = true;
            self.records.push(RxRecord {
                send_time_s: state.send_time,
                recv_time_s: rx_time,
                seq: state.seq,
                payload_bytes: self.sc.traffic.udp_payload_bytes,
            });
        }
    }

    fn on_ack_timeout(&mut self, t: f64) {
        let dev = &self.sc.tx_device;
        match on_tx_failure(&self.backoff, dev.cw_min, dev.cw_max, dev.retry_limit) {
            TxFailureOutcome::Retry(next) => {
                self.backoff = next;
                self.mac_pending = false;
                self.mac_ready_at = t;
                self.maybe_start_access(t);
            }
            TxFailureOutcome::Discard => {
                self.mac_discards += 1;
                if let Some(&Frame::Data { dgram, frag }) = self.queue.front() {
                    let state = &mut self.datagrams[dgram];
                    if !state.frag_delivered[frag] {
                        state.frag_gone[frag] = true;
                        state.gone_any = true;
                        self.fragments_lost += 1;
                    }
                }
                self.release_head(t, t);
            }
        }
    }

    fn execute(mut self) -> RunMetrics {
        let duration = self.sc.duration_s;
        self.schedule(duration, EventKind::RunEnd);
        if self.sc.traffic.send_interval_s <= duration {
            self.schedule(self.sc.traffic.send_interval_s, EventKind::GenerateDatagram);
        }
        if self.sc.traffic.beacon_interval_s <= duration {
            self.schedule(self.sc.traffic.beacon_interval_s, EventKind::GenerateBeacon);
        }
        while let Some(std::cmp::Reverse(ev)) = self.heap.pop() {
            debug_assert!(ev.time <= duration + 1e-12);
            match ev.kind {
                EventKind::GenerateDatagram => self.on_generate_datagram(ev.time),
                EventKind::GenerateBeacon => self.on_generate_beacon(ev.time),
                EventKind::TxStart => {
                    let airtime = self.head_airtime();
                    self.schedule(ev.time + airtime, EventKind::TxEnd);
                }
                EventKind::TxEnd => {
                    if ev.time <= duration {
                        self.on_tx_end(ev.time);
                    }
                }
                EventKind::AckTimeout => self.on_ack_timeout(ev.time),
                EventKind::RunEnd => break,
            }
            // Anything scheduled past the end time dies with the run.
            while let Some(std::cmp::Reverse(ev)) = self.heap.peek() {
                if ev.time > duration {
                    self.heap.pop();
                } else {
                    break;
                }
            }
        }
        self.finalize()
    }

    fn finalize(self) -> RunMetrics {
        let duration = self.sc.duration_s;
        let records: Vec<RxRecord> = self
            .records
            .into_iter()
            .filter(|r| r.recv_time_s >= self.opts.warmup_trim_s)
            .collect();

        let bin_width = self.opts.bin_width_s;
        let n_bins = (duration / bin_width).ceil().max(1.0) as usize;
        let mut bins = vec![0.0; n_bins];
        for r in &records {
            let idx = ((r.recv_time_s / bin_width) as usize).min(n_bins - 1);
            bins[idx] += 8.0 * f64::from(r.payload_bytes);
        }
        for b in &mut bins {
            *b /= bin_width;
        }

        let pairs: Vec<(f64, f64)> = records.iter().map(|r| (r.send_time_s, r.recv_time_s)).collect();
        let jitter_series_s = if pairs.len() >= 2 {
            jitter_rfc1889(&pairs).expect("two or more records")
        } else {
            Vec::new()
        };

        let mut received = 0u64;
        let mut lost = 0u64;
        let mut pending = 0u64;
        for d in &self.datagrams {
            if d.completed {
                received += 1;
            } else if d.gone_any {
                lost += 1;
            } else {
                pending += 1;
            }
        }
        let fragments_generated = self.datagrams.len() as u64 * self.frag_psdus.len() as u64;

        RunMetrics {
            duration_s: duration,
            bin_width_s: bin_width,
            throughput_samples_bps: bins,
            jitter_series_s,
            rx_records: records,
            datagrams_generated: self.datagrams.len() as u64,
            datagrams_received: received,
            datagrams_fragment_lost: lost,
            datagrams_pending: pending,
            fragments_generated,
            fragments_delivered: self.fragments_delivered,
            fragments_lost: self.fragments_lost,
            fragments_pending: fragments_generated - self.fragments_delivered - self.fragments_lost,
            queue_drops: self.queue.drop_count(),
            channel_losses: self.channel_losses,
            mac_discards: self.mac_discards,
            ack_losses: self.ack_losses,
            beacons_generated: self.beacons_generated,
            beacons_delivered: self.beacons_delivered,
            queue_peak: self.queue_peak as u64,
        }
    }
}

/// Simulates one scenario with default metric options.
pub fn run(scenario: &ScenarioConfig) -> Result<RunMetrics, SimError> {
    run_with_options(scenario, RunOptions::default())
}

pub fn run_with_options(scenario: &ScenarioConfig, opts: RunOptions) -> Result<RunMetrics, SimError> {
    Ok(Engine::new(scenario, opts)?.execute())
}

/// Smallest send interval (1 µs resolution) whose full run reports zero
/// queue drops: the paper's trial-and-error channel saturation, done by
/// bisection. Re-running the scenario with the returned interval reproduces
/// zero drops; halving it overflows the queue.
pub fn saturate_interval(scenario: &ScenarioConfig) -> Result<f64, SimError> {
    scenario.validate()?;
    let probe = |us: u64| -> Result<u64, SimError> {
        let mut sc = scenario.clone();
        sc.traffic.send_interval_s = us as f64 * 1e-6;
        Ok(run(&sc)?.queue_drops)
    };
    let max_us = (scenario.duration_s * 1e6).ceil() as u64;
    if probe(max_us)? > 0 {
        return Err(SimError::Tuning(
            "queue drops persist even at one datagram per run".into(),
        ));
    }
    let mut lo = 1u64;
    let mut hi = max_us;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if probe(mid)? == 0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(hi as f64 * 1e-6)
}

/// Axes of a parameter sweep. An empty axis keeps the base scenario's value.
#[derive(Debug, Clone, Default)]
pub struct SweepAxes {
    pub distances_m: Vec<f64>,
    pub mcs: Vec<McsId>,
    pub devices: Vec<DeviceKind>,
}

/// One completed sweep cell.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub distance_m: f64,
    pub mcs: McsId,
    pub device: DeviceKind,
    pub seed: u64,
    pub metrics: RunMetrics,
}

/// Runs `jobs`-way parallel closures on a dedicated pool, or on the global
/// pool when `jobs` is `None`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
    }
}

/// Cartesian product of the axes and seeds, each cell an independent run.
///
/// Rows come back in axis order (distances, then MCS, then devices, then
/// seeds); execution order does not affect the results.
pub fn sweep(
    base: &ScenarioConfig,
    axes: &SweepAxes,
    seeds: &[u64],
    jobs: Option<usize>,
) -> Result<Vec<SweepRow>, SimError> {
    base.validate()?;
    if seeds.is_empty() {
        return Err(SimError::EmptySweep("at least one seed"));
    }
    let distances = if axes.distances_m.is_empty() {
        vec![base.distance_m]
    } else {
        axes.distances_m.clone()
    };
    let mcs_list = if axes.mcs.is_empty() { vec![base.mcs] } else { axes.mcs.clone() };
    let devices: Vec<Option<DeviceKind>> = if axes.devices.is_empty() {
        vec![None]
    } else {
        axes.devices.iter().copied().map(Some).collect()
    };

    let mut cells = Vec::new();
    for &d in &distances {
        for &m in &mcs_list {
            for &dev in &devices {
                for &seed in seeds {
                    cells.push((d, m, dev, seed));
                }
            }
        }
    }

    with_jobs(jobs, || {
        use rayon::prelude::*;
        cells
            .par_iter()
            .map(|&(distance, mcs, dev, seed)| {
                let mut sc = base.clone();
                sc.distance_m = distance;
                sc.mcs = mcs;
                sc.seed = seed;
                if let Some(kind) = dev {
                    sc.tx_device = kind.profile();
                    sc.rx_device = kind.profile();
                }
                let metrics = run(&sc)?;
                Ok(SweepRow {
                    distance_m: distance,
                    mcs,
                    device: sc.tx_device.kind,
                    seed,
                    metrics,
                })
            })
            .collect::<Result<Vec<_>, SimError>>()
    })
}
