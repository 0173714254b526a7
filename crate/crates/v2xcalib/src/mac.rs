//! 802.11p MAC model: bounded FIFO transmit queue, CSMA/CA access with a
//! binary-exponential contention window, and the retry bookkeeping for
//! unicast frames. RTS/CTS does not exist in this model; broadcast frames
//! (beacons) are never retried and never wait for an ACK.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::rng::SimRng;

/// MAC timing for a 10 MHz 802.11p channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacTimingConstants {
    pub slot_s: f64,
    pub sifs_s: f64,
    pub difs_s: f64,
    /// PSDU length of an ACK frame, bytes.
    pub ack_psdu_bytes: u32,
}

impl MacTimingConstants {
    pub const IEEE_802_11P_10MHZ: MacTimingConstants = MacTimingConstants {
        slot_s: 13e-6,
        sifs_s: 32e-6,
        difs_s: 58e-6,
        ack_psdu_bytes: 14,
    };

    /// DIFS must equal SIFS + 2 slots.
    pub fn is_consistent(&self) -> bool {
        (self.difs_s - (self.sifs_s + 2.0 * self.slot_s)).abs() < 1e-12
    }
}

impl Default for MacTimingConstants {
    fn default() -> Self {
        Self::IEEE_802_11P_10MHZ
    }
}

/// Result of offering a frame to the TX queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnqueueOutcome {
    Accepted,
    Dropped,
}

/// Bounded FIFO transmit queue. Refused enqueues increment `drop_count` and
/// discard the frame; occupancy never exceeds the capacity.
#[derive(Debug, Clone)]
pub struct MacQueue<T> {
    entries: VecDeque<T>,
    capacity: usize,
    drop_count: u64,
}

impl<T> MacQueue<T> {
    pub fn new(capacity: usize) -> Self {
        MacQueue {
            entries: VecDeque::with_capacity(capacity),
            capacity,
            drop_count: 0,
        }
    }

    pub fn enqueue(&mut self, frame: T) -> EnqueueOutcome {
        if self.entries.len() < self.capacity {
            self.entries.push_back(frame);
            EnqueueOutcome::Accepted
        } else {
            self.drop_count += 1;
            EnqueueOutcome::Dropped
        }
    }

    pub fn front(&self) -> Option<&T> {
        self.entries.front()
    }

    pub fn pop_front(&mut self) -> Option<T> {
        self.entries.pop_front()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn drop_count(&self) -> u64 {
        self.drop_count
    }
}

/// Backoff bookkeeping for the frame currently at the head of the queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackoffState {
    pub cw_current: u32,
    pub retry_count: u32,
    pub slots_remaining: u32,
}

impl BackoffState {
    /// Fresh state for a new head-of-queue frame.
    pub fn fresh(cw_min: u32) -> Self {
        BackoffState {
            cw_current: cw_min,
            retry_count: 0,
            slots_remaining: 0,
        }
    }
}

/// Uniform backoff draw in `[0, cw_current]` slots.
pub fn draw_backoff(cw_current: u32, rng: &mut SimRng) -> u32 {
    rng.uniform_inclusive_u32(cw_current)
}

/// What happens to a unicast frame after an ACK timeout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxFailureOutcome {
    /// Retry with the contention window doubled (capped at `cw_max`).
    Retry(BackoffState),
    /// Retry limit exceeded: the frame is discarded and the contention
    /// window resets to `cw_min` for the next frame.
    Discard,
}

/// Advances the backoff state after a failed transmission attempt:
/// `cw ← min((cw + 1)·2 − 1, cw_max)`, retry count + 1, discard once the
/// retry count exceeds the limit.
pub fn on_tx_failure(state: &BackoffState, cw_min: u32, cw_max: u32, retry_limit: u32) -> TxFailureOutcome {
    let _ = cw_min;
    let retries = state.retry_count + 1;
    if retries > retry_limit {
        TxFailureOutcome::Discard
    } else {
        TxFailureOutcome::Retry(BackoffState {
            cw_current: ((state.cw_current + 1) * 2 - 1).min(cw_max),
            retry_count: retries,
            slots_remaining: state.slots_remaining,
        })
    }
}

/// Earliest transmission start for the head frame: the medium must have been
/// idle for a full DIFS, then `slots_remaining` idle slots elapse; the slot
/// countdown freezes during busy intervals and resumes after a fresh DIFS.
///
/// `busy` holds `(start, end)` pairs, sorted by start and non-overlapping.
/// With no busy intervals the start time is `now + DIFS + slots·slot`.
pub fn medium_access_delay(
    state: &BackoffState,
    busy: &[(f64, f64)],
    now: f64,
    timing: &MacTimingConstants,
) -> f64 {
    debug_assert!(busy.windows(2).all(|w| w[0].1 <= w[1].0), "busy intervals must be sorted");
    let mut t = now;
    let mut slots = state.slots_remaining;
    let mut next = busy.iter().copied().peekable();
    loop {
        // Skip any busy interval covering t.
        while let Some(&(s, e)) = next.peek() {
            if e <= t {
                next.next();
            } else if s <= t {
                t = e;
                next.next();
            } else {
                break;
            }
        }
        let idle_until = next.peek().map(|&(s, _)| s).unwrap_or(f64::INFINITY);
        let needed = timing.difs_s + f64::from(slots) * timing.slot_s;
        if t + needed <= idle_until {
            return t + needed;
        }
        // Count whole slots that fit after the DIFS, then freeze.
        let usable = idle_until - t - timing.difs_s;
        if usable > 0.0 {
            let done = (usable / timing.slot_s).floor() as u32;
            slots = slots.saturating_sub(done.min(slots));
        }
        let (_, e) = next.next().expect("idle_until finite implies another interval");
        t = e;
    }
}
