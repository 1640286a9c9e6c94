//! Device-state probability models and the distribution of aggregated power.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::convolve::{self, DEFAULT_AXIS_CAP};
use crate::device_model::{DeviceSet, Watts};
use crate::error::{Error, Result};
use crate::state_space::{StateDigits, StateWalk};

/// Slack allowed when on-state probabilities of a device sum slightly above 1.
const SUM_SLACK: f64 = 1e-12;

/// Normalization tolerance for power distributions.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Independent per-device state probabilities. Only on-state probabilities
/// are stored; the off-state probability is `1 - Σ p_d^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceProbabilities {
    on: Vec<Vec<f64>>,
    off: Vec<f64>,
}

impl DeviceProbabilities {
    /// `per_device[d][s-1]` is the probability that device `d` runs in
    /// on-state `s`. Shapes must match `set`.
    pub fn new(set: &DeviceSet, per_device: Vec<Vec<f64>>) -> Result<Self> {
        if per_device.len() != set.len()
            || per_device
                .iter()
                .zip(set.devices())
                .any(|(p, d)| p.len() != d.on_state_count())
        {
            return Err(Error::ShapeMismatch);
        }
        let mut off = Vec::with_capacity(per_device.len());
        for (device, probs) in per_device.iter().enumerate() {
            if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::InvalidProbability { device });
            }
            let on: f64 = probs.iter().sum();
            if on > 1.0 + SUM_SLACK {
                return Err(Error::InvalidProbability { device });
            }
            off.push((1.0 - on).max(0.0));
        }
        Ok(Self {
            on: per_device,
            off,
        })
    }

    pub fn device_count(&self) -> usize {
        self.on.len()
    }

    pub fn on(&self, device: usize) -> &[f64] {
        &self.on[device]
    }

    /// `p_d^0`.
    pub fn off(&self, device: usize) -> f64 {
        self.off[device]
    }

    /// `p_d^s`, with `s = 0` the off state.
    pub fn state(&self, device: usize, state: usize) -> f64 {
        if state == 0 {
            self.off[device]
        } else {
            self.on[device][state - 1]
        }
    }

    /// Probabilities of all states of `device`, off first.
    pub fn states(&self, device: usize) -> impl Iterator<Item = f64> + '_ {
        core::iter::once(self.off[device]).chain(self.on[device].iter().copied())
    }

    pub fn matches(&self, set: &DeviceSet) -> bool {
        self.on.len() == set.len()
            && self
                .on
                .iter()
                .zip(set.devices())
                .all(|(p, d)| p.len() == d.on_state_count())
    }

    pub(crate) fn check(&self, set: &DeviceSet) -> Result<()> {
        if self.matches(set) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch)
        }
    }
}

/// Each device is off with probability `1 - p_hat`; the remaining mass is
/// split equally over its on-states.
pub fn uniform_model(set: &DeviceSet, p_hat: f64) -> Result<DeviceProbabilities> {
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(Error::InvalidParameter(
            "device probability must lie in [0, 1]",
        ));
    }
    let per_device = set
        .devices()
        .iter()
        .map(|d| {
            let n = d.on_state_count();
            alloc::vec![p_hat / n as f64; n]
        })
        .collect();
    DeviceProbabilities::new(set, per_device)
}

/// Every device uniform over its `ŝ_d + 1` states, so that all `M`
/// configurations are equally likely.
pub fn max_entropy_model(set: &DeviceSet) -> DeviceProbabilities {
    let per_device = set
        .devices()
        .iter()
        .map(|d| alloc::vec![1.0 / d.state_count() as f64; d.on_state_count()])
        .collect();
    DeviceProbabilities::new(set, per_device).expect("uniform model is valid")
}

/// `p_k = Π_d p_d^{s_d}`.
pub fn state_probability(
    set: &DeviceSet,
    model: &DeviceProbabilities,
    digits: &StateDigits,
) -> Result<f64> {
    model.check(set)?;
    digits.check(set)?;
    Ok(digits
        .as_slice()
        .iter()
        .enumerate()
        .map(|(d, &s)| model.state(d, s))
        .product())
}

/// Probability of one particular configuration with `z` of `n` on-off
/// devices on: `p̂^z (1 - p̂)^(n - z)`.
pub fn z_state_probability(n: usize, z: usize, p_hat: f64) -> f64 {
    assert!(z <= n, "z must not exceed n");
    libm::pow(p_hat, z as f64) * libm::pow(1.0 - p_hat, (n - z) as f64)
}

/// `Π_d p_d^0`, the probability that the meter reads 0 W.
pub fn zero_power_probability(model: &DeviceProbabilities) -> f64 {
    (0..model.device_count()).map(|d| model.off(d)).product()
}

/// `E[P] = Σ_d Σ_s p_d^s P_d^s`.
pub fn expected_power(set: &DeviceSet, model: &DeviceProbabilities) -> Result<f64> {
    model.check(set)?;
    Ok(set
        .devices()
        .iter()
        .enumerate()
        .map(|(d, dev)| {
            dev.on_states()
                .iter()
                .zip(model.on(d))
                .map(|(&p, &q)| p as f64 * q)
                .sum::<f64>()
        })
        .sum())
}

/// Probability mass over aggregated power values. Only values with
/// non-zero mass are stored, in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDistribution {
    masses: Vec<(Watts, f64)>,
    description: String,
}

impl PowerDistribution {
    /// Validates non-negativity and normalization (within 1e-9); zero
    /// masses are dropped and entries are sorted by power.
    pub fn from_masses(
        masses: impl IntoIterator<Item = (Watts, f64)>,
        description: impl Into<String>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Watts, f64> = BTreeMap::new();
        for (p, m) in masses {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidParameter(
                    "masses must be finite and non-negative",
                ));
            }
            *merged.entry(p).or_insert(0.0) += m;
        }
        let masses: Vec<_> = merged.into_iter().filter(|&(_, m)| m != 0.0).collect();
        let total: f64 = masses.iter().map(|&(_, m)| m).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self {
            masses,
            description: description.into(),
        })
    }

    pub fn masses(&self) -> &[(Watts, f64)] {
        &self.masses
    }

    pub fn mass_at(&self, power: Watts) -> f64 {
        self.masses
            .binary_search_by_key(&power, |&(p, _)| p)
            .map_or(0.0, |i| self.masses[i].1)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().map(|&(_, m)| m).sum()
    }

    pub fn mean(&self) -> f64 {
        self.masses.iter().map(|&(p, m)| p as f64 * m).sum()
    }

    pub fn support_len(&self) -> usize {
        self.masses.len()
    }
}

fn describe(model: &DeviceProbabilities, engine: &str) -> String {
    format!("{} independent devices, {}", model.device_count(), engine)
}

/// `p(P)` by convolving the per-device state distributions along the
/// integer power axis.
pub fn power_distribution(
    set: &DeviceSet,
    model: &DeviceProbabilities,
) -> Result<PowerDistribution> {
    power_distribution_with_cap(set, model, DEFAULT_AXIS_CAP)
}

pub fn power_distribution_with_cap(
    set: &DeviceSet,
    model: &DeviceProbabilities,
    axis_cap: u64,
) -> Result<PowerDistribution> {
    model.check(set)?;
    let dense: Vec<f64> = convolve::fold(set, axis_cap, |d, s| model.state(d, s))?;
    PowerDistribution::from_masses(
        dense.into_iter().enumerate().map(|(p, m)| (p as Watts, m)),
        describe(model, "convolution"),
    )
}

/// `p(P) = Σ_k p_k` over configurations with `P_k = P`, by walking all
/// configurations.
pub fn enumerate_power_distribution(
    set: &DeviceSet,
    model: &DeviceProbabilities,
    cap: u64,
) -> Result<PowerDistribution> {
    model.check(set)?;
    let states = set.state_count()?;
    if states > cap {
        return Err(Error::EnumerationCap { states, cap });
    }
    let mut masses: BTreeMap<Watts, f64> = BTreeMap::new();
    let mut walk = StateWalk::new(set);
    while let Some((digits, power)) = walk.current() {
        let p: f64 = digits
            .iter()
            .enumerate()
            .map(|(d, &s)| model.state(d, s))
            .product();
        *masses.entry(power).or_insert(0.0) += p;
        walk.advance();
    }
    PowerDistribution::from_masses(masses, describe(model, "enumeration"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device_model::linear_set;
    use crate::state_space::DEFAULT_ENUMERATION_CAP;
    use alloc::vec;

    fn on_off_10() -> DeviceSet {
        linear_set(10, 5, 5).unwrap()
    }

    #[test]
    fn uniform_split() {
        let set = DeviceSet::from_power_lists("x", [vec![5], vec![10, 20]]).unwrap();
        let m = uniform_model(&set, 0.6).unwrap();
        assert!((m.off(1) - 0.4).abs() < 1e-15);
        assert_eq!(m.on(1), &[0.3, 0.3]);
        let m = uniform_model(&set, 0.0).unwrap();
        assert_eq!(zero_power_probability(&m), 1.0);
        assert!(uniform_model(&set, 1.5).is_err());
        assert!(uniform_model(&set, f64::NAN).is_err());
    }

    #[test]
    fn max_entropy_is_uniform_over_states() {
        let set = DeviceSet::from_power_lists("x", [vec![5], vec![10, 20]]).unwrap();
        let m = max_entropy_model(&set);
        assert_eq!(m.on(0), &[0.5]);
        assert!(m.states(1).all(|p| (p - 1.0 / 3.0).abs() < 1e-15));
        let b = DeviceSet::on_off("b", &[1, 2, 3, 5, 8, 14, 24, 41, 69, 117]).unwrap();
        let m = max_entropy_model(&b);
        assert_eq!(m, uniform_model(&b, 0.5).unwrap());
        let digits = crate::state_space::digits_of_state(&b, 777).unwrap();
        assert_eq!(state_probability(&b, &m, &digits).unwrap(), 1.0 / 1024.0);
    }

    #[test]
    fn model_validation() {
        let set = DeviceSet::from_power_lists("x", [vec![5], vec![10, 20]]).unwrap();
        assert_eq!(
            DeviceProbabilities::new(&set, vec![vec![0.1]]),
            Err(Error::ShapeMismatch)
        );
        assert_eq!(
            DeviceProbabilities::new(&set, vec![vec![0.1], vec![0.7, 0.4]]),
            Err(Error::InvalidProbability { device: 1 })
        );
        assert_eq!(
            DeviceProbabilities::new(&set, vec![vec![-0.1], vec![0.1, 0.1]]),
            Err(Error::InvalidProbability { device: 0 })
        );
    }

    #[test]
    fn extreme_state_probabilities() {
        let set = on_off_10();
        let m = uniform_model(&set, 0.1).unwrap();
        let off = StateDigits::all_off(&set);
        let on = StateDigits::all_max(&set);
        assert!((state_probability(&set, &m, &off).unwrap() - 0.3486784401).abs() < 1e-12);
        assert!((state_probability(&set, &m, &on).unwrap() - 1e-10).abs() < 1e-20);
    }

    #[test]
    fn z_probabilities() {
        assert!((z_state_probability(10, 0, 0.1) - 0.3486784401).abs() < 1e-12);
        assert!((z_state_probability(10, 10, 0.9) - 0.3486784401).abs() < 1e-12);
        for z in 0..=10 {
            assert_eq!(z_state_probability(10, z, 0.5), 1.0 / 1024.0);
        }
    }

    #[test]
    fn zero_power() {
        let set = on_off_10();
        let p = |x| zero_power_probability(&uniform_model(&set, x).unwrap());
        assert!((p(0.1) - 0.3486784401).abs() < 1e-12);
        assert!((p(0.5) - 0.0009765625).abs() < 1e-15);
        assert_eq!(p(1.0), 0.0);
    }

    #[test]
    fn two_unit_devices() {
        let set = DeviceSet::on_off("11", &[1, 1]).unwrap();
        let dist = power_distribution(&set, &uniform_model(&set, 0.5).unwrap()).unwrap();
        assert_eq!(dist.masses(), &[(0, 0.25), (1, 0.5), (2, 0.25)]);
    }

    #[test]
    fn point_mass_when_all_off() {
        let set = on_off_10();
        let dist = power_distribution(&set, &uniform_model(&set, 0.0).unwrap()).unwrap();
        assert_eq!(dist.masses(), &[(0, 1.0)]);
    }

    #[test]
    fn binary_set_uniform_power() {
        let b2 = DeviceSet::on_off("b2", &(0..10).map(|i| 1u64 << i).collect::<Vec<_>>()).unwrap();
        let dist = power_distribution(&b2, &max_entropy_model(&b2)).unwrap();
        assert_eq!(dist.support_len(), 1024);
        assert!(dist
            .masses()
            .iter()
            .all(|&(_, m)| (m - 1.0 / 1024.0).abs() < 1e-15));
    }

    #[test]
    fn engines_agree_on_multistate_set() {
        let set = DeviceSet::from_power_lists("x", [vec![5], vec![3, 7], vec![7], vec![2, 4, 9]])
            .unwrap();
        let model = DeviceProbabilities::new(
            &set,
            vec![vec![0.6], vec![0.2, 0.1], vec![0.9], vec![0.05, 0.3, 0.1]],
        )
        .unwrap();
        let a = power_distribution(&set, &model).unwrap();
        let b = enumerate_power_distribution(&set, &model, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(a.support_len(), b.support_len());
        for (&(pa, ma), &(pb, mb)) in a.masses().iter().zip(b.masses()) {
            assert_eq!(pa, pb);
            assert!((ma - mb).abs() < 1e-15);
        }
        assert!((a.mass_at(0) - zero_power_probability(&model)).abs() < 1e-15);
        assert!((a.mean() - expected_power(&set, &model).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            PowerDistribution::from_masses([(0, 0.5), (1, 0.4)], "x"),
            Err(Error::NotNormalized(_))
        ));
    }
}
