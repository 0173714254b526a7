//! Deterministic random number generation.
//!
//! Every stochastic quantity in the simulator (backoff slots, noise, fading,
//! bit-error draws) comes from a [`SimRng`] owned by the caller. The generator
//! is a ChaCha12 stream, and the uniform/normal mappings are implemented here
//! rather than borrowed from a distributions crate so that a given seed
//! produces the same draw sequence on every platform and with every future
//! dependency bump.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// Folds a sequence of values into a single seed with splitmix64 steps.
///
/// Used to derive independent per-run seeds from a base seed plus axis
/// coordinates; stable across platforms (unlike `DefaultHasher`).
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15;
    for &p in parts {
        h = splitmix64(h ^ splitmix64(p));
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded generator handed explicitly to every stochastic operation.
#[derive(Debug, Clone)]
pub struct SimRng {
    inner: ChaCha12Rng,
}

impl SimRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Generator seeded from a base seed plus distinguishing coordinates.
    pub fn derived(base: u64, parts: &[u64]) -> Self {
        let mut all = Vec::with_capacity(parts.len() + 1);
        all.push(base);
        all.extend_from_slice(parts);
        Self::from_seed(mix_seed(&all))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `(0, 1]`; safe as a `ln` argument.
    fn uniform_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, max]`.
    ///
    /// Reduction is by modulo; exact when `max + 1` is a power of two, which
    /// holds for every contention-window draw (CW values are `2^m - 1`).
    pub fn uniform_inclusive_u32(&mut self, max: u32) -> u32 {
        let n = u64::from(max) + 1;
        (self.next_u64() % n) as u32
    }

    /// One draw from `Normal(mean, sigma)` via Box-Muller.
    pub fn normal(&mut self, mean: f64, sigma: f64) -> f64 {
        let u1 = self.uniform_open01();
        let u2 = self.uniform_f64();
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        mean + sigma * z
    }
}
