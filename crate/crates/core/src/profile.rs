//! Load profiles: energy, average power, device-probability estimators and
//! a seeded synthesizer.
//!
//! The synthesizer models a discrete memoryless source: at every time step
//! each device draws its state independently from the model, in device
//! order, and the emitted sample is the aggregated power. Randomness comes
//! from xoshiro256++ seeded through SplitMix64 (`seed_from_u64`); each
//! device draw consumes one 64-bit output, mapped to a uniform double in
//! `[0, 1)` from its top 53 bits. Profiles are therefore bit-identical for
//! equal inputs on every platform.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::device_model::{DeviceSet, Watts};
use crate::error::{Error, Result};
use crate::probability::{DeviceProbabilities, PowerDistribution};

/// A sampled sequence of aggregated power values with a fixed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadProfile {
    samples: Vec<Watts>,
    dt: f64,
}

impl LoadProfile {
    /// Requires at least one sample and a finite positive interval (seconds).
    pub fn new(samples: Vec<Watts>, dt: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("profile needs at least one sample"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(
                "sampling interval must be positive",
            ));
        }
        Ok(Self { samples, dt })
    }

    pub fn samples(&self) -> &[Watts] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn power_sum(&self) -> u128 {
        self.samples.iter().map(|&p| p as u128).sum()
    }

    /// `E = Σ P_i Δt` in watt-seconds.
    pub fn energy(&self) -> f64 {
        self.power_sum() as f64 * self.dt
    }

    /// `E / (n Δt)`.
    pub fn average_power(&self) -> f64 {
        self.power_sum() as f64 / self.samples.len() as f64
    }

    /// Fraction of samples equal to 0 W.
    pub fn zero_fraction(&self) -> f64 {
        self.samples.iter().filter(|&&p| p == 0).count() as f64 / self.samples.len() as f64
    }

    /// Relative frequency of each sampled power value.
    pub fn empirical_distribution(&self) -> Vec<(Watts, f64)> {
        let mut counts: BTreeMap<Watts, u64> = BTreeMap::new();
        for &p in &self.samples {
            *counts.entry(p).or_insert(0) += 1;
        }
        let n = self.samples.len() as f64;
        counts.into_iter().map(|(p, c)| (p, c as f64 / n)).collect()
    }
}

/// Result of [`estimate_p_hat`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PHatEstimate {
    pub p_hat: f64,
    /// Set when the raw ratio exceeded 1 (profile inconsistent with the set)
    /// and `p_hat` was clamped.
    pub clamped: bool,
}

/// `p̂ = E / (P_total n Δt)`.
///
/// Unbiased only for on-off sets: a multi-state device contributes less
/// than its maximum power in its lower on-states, so the estimate is biased
/// low for sets containing such devices.
pub fn estimate_p_hat(profile: &LoadProfile, set: &DeviceSet) -> PHatEstimate {
    let raw = profile.average_power() / set.total_power() as f64;
    if raw > 1.0 {
        PHatEstimate {
            p_hat: 1.0,
            clamped: true,
        }
    } else {
        PHatEstimate {
            p_hat: raw,
            clamped: false,
        }
    }
}

/// `p_d = n_d / n` from a device's run-time in samples.
pub fn device_probability_from_runtime(n_d: u64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be positive"));
    }
    if n_d > n {
        return Err(Error::InvalidParameter("run-time exceeds the sample count"));
    }
    Ok(n_d as f64 / n as f64)
}

/// Per-device cumulative thresholds over states `0..=ŝ_d`.
struct StateSampler {
    cumulative: Vec<f64>,
    last_possible: usize,
}

impl StateSampler {
    fn new(probs: impl Iterator<Item = f64>) -> Self {
        let mut acc = 0.0;
        let mut last_possible = 0;
        let cumulative = probs
            .enumerate()
            .map(|(s, p)| {
                if p > 0.0 {
                    last_possible = s;
                }
                acc += p;
                acc
            })
            .collect();
        Self {
            cumulative,
            last_possible,
        }
    }

    fn draw(&self, u: f64) -> usize {
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.last_possible)
    }
}

fn unit_interval(rng: &mut Xoshiro256PlusPlus) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws `n` independent time steps (interval 1 s) from `model`.
pub fn synthesize(
    set: &DeviceSet,
    model: &DeviceProbabilities,
    n: usize,
    seed: u64,
) -> Result<LoadProfile> {
    if !model.matches(set) {
        return Err(Error::ShapeMismatch);
    }
    if n == 0 {
        return Err(Error::InvalidParameter("profile needs at least one sample"));
    }
    let samplers: Vec<StateSampler> = (0..set.len())
        .map(|d| StateSampler::new(model.states(d)))
        .collect();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| {
            set.devices()
                .iter()
                .zip(&samplers)
                .map(|(device, sampler)| device.power(sampler.draw(unit_interval(&mut rng))))
                .sum()
        })
        .collect();
    LoadProfile::new(samples, 1.0)
}

/// Total variation distance `½ Σ |p(P) - q(P)|` between an analytic
/// distribution and empirical frequencies.
pub fn total_variation(dist: &PowerDistribution, empirical: &[(Watts, f64)]) -> f64 {
    let mut merged: BTreeMap<Watts, f64> = BTreeMap::new();
    for &(p, m) in dist.masses() {
        *merged.entry(p).or_insert(0.0) += m;
    }
    for &(p, m) in empirical {
        *merged.entry(p).or_insert(0.0) -= m;
    }
    0.5 * merged.values().map(|d| d.abs()).sum::<f64>()
}
