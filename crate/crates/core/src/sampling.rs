//! Deterministic sample generators for tests and probes.
//!
//! A tiny embedded generator keeps seeded test data bit-stable across
//! platforms without pulling in an RNG dependency.

use crate::spectral::{GridFunction, PeriodicGrid, TWO_PI};

/// SplitMix64: tiny, fast, and good enough for test-data synthesis.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `(-1, 1)`.
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

/// Random mean-zero band-limited function with modes `1..=max_mode`, mode
/// amplitudes decaying like `1/m`, rescaled to the requested max-abs value.
pub fn random_band_limited(
    grid: PeriodicGrid,
    max_mode: usize,
    target_max_abs: f64,
    rng: &mut SplitMix64,
) -> GridFunction {
    assert!(max_mode >= 1 && max_mode < grid.len() / 2);
    let coeffs: Vec<(f64, f64)> = (1..=max_mode)
        .map(|m| {
            let d = m as f64;
            (rng.next_signed() / d, rng.next_signed() / d)
        })
        .collect();
    let raw = GridFunction::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let m = (i + 1) as f64;
                a * (TWO_PI * m * x).cos() + b * (TWO_PI * m * x).sin()
            })
            .sum()
    });
    let scale = raw.max_abs();
    if scale == 0.0 {
        raw
    } else {
        raw.scaled(target_max_abs / scale)
    }
}
