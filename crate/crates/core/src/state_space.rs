//! Configurations of a device set and their aggregated power values.
//!
//! Configurations are indexed `0..M` (the first configuration, all devices
//! off, is index 0). The index is a mixed-radix number whose first digit is
//! device 0's state, so device 0 varies fastest.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::convolve::{self, DEFAULT_AXIS_CAP};
use crate::device_model::{DeviceSet, Watts};
use crate::error::{Error, Result};

/// Default limit on the number of configurations the brute-force engine walks.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// Per-device state indices of one configuration; 0 is off.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateDigits(Vec<usize>);

impl StateDigits {
    pub fn new(set: &DeviceSet, digits: Vec<usize>) -> Result<Self> {
        let digits = Self(digits);
        digits.check(set)?;
        Ok(digits)
    }

    pub fn all_off(set: &DeviceSet) -> Self {
        Self(vec![0; set.len()])
    }

    pub fn all_max(set: &DeviceSet) -> Self {
        Self(set.devices().iter().map(|d| d.on_state_count()).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of devices not in the off state.
    pub fn involved_devices(&self) -> usize {
        self.0.iter().filter(|&&s| s != 0).count()
    }

    pub(crate) fn check(&self, set: &DeviceSet) -> Result<()> {
        if self.0.len() != set.len()
            || self
                .0
                .iter()
                .zip(set.devices())
                .any(|(&s, d)| s > d.on_state_count())
        {
            return Err(Error::DigitsMismatch);
        }
        Ok(())
    }
}

/// Mixed-radix decomposition of configuration index `k`.
pub fn digits_of_state(set: &DeviceSet, k: u64) -> Result<StateDigits> {
    let states = set.state_count()?;
    if k >= states {
        return Err(Error::StateIndexOutOfRange { index: k, states });
    }
    let mut rest = k;
    let digits = set
        .devices()
        .iter()
        .map(|d| {
            let radix = d.state_count() as u64;
            let digit = rest % radix;
            rest /= radix;
            digit as usize
        })
        .collect();
    Ok(StateDigits(digits))
}

/// Inverse of [`digits_of_state`].
pub fn state_index(set: &DeviceSet, digits: &StateDigits) -> Result<u64> {
    digits.check(set)?;
    let mut index = 0u64;
    let mut weight = 1u64;
    for (&s, d) in digits.0.iter().zip(set.devices()) {
        index += s as u64 * weight;
        weight = weight.saturating_mul(d.state_count() as u64);
    }
    Ok(index)
}

/// `P_k = Σ_d P_d^{s_d}` with `P_d^0 = 0`.
pub fn state_power(set: &DeviceSet, digits: &StateDigits) -> Result<Watts> {
    digits.check(set)?;
    Ok(digits
        .0
        .iter()
        .zip(set.devices())
        .map(|(&s, d)| d.power(s))
        .sum())
}

/// Walks every configuration in index order, maintaining the aggregated
/// power incrementally (odometer style).
#[derive(Debug, Clone)]
pub struct StateWalk<'a> {
    set: &'a DeviceSet,
    digits: Vec<usize>,
    power: Watts,
    done: bool,
}

impl<'a> StateWalk<'a> {
    pub fn new(set: &'a DeviceSet) -> Self {
        Self {
            set,
            digits: vec![0; set.len()],
            power: 0,
            done: false,
        }
    }

    /// Current digits and power; `None` once the walk is exhausted.
    pub fn current(&self) -> Option<(&[usize], Watts)> {
        (!self.done).then_some((&self.digits[..], self.power))
    }

    pub fn advance(&mut self) {
        for (digit, device) in self.digits.iter_mut().zip(self.set.devices()) {
            self.power -= device.power(*digit);
            if *digit < device.on_state_count() {
                *digit += 1;
                self.power += device.power(*digit);
                return;
            }
            *digit = 0;
        }
        self.done = true;
    }
}

fn check_cap(set: &DeviceSet, cap: u64) -> Result<u64> {
    let states = set.state_count()?;
    if states > cap {
        return Err(Error::EnumerationCap { states, cap });
    }
    Ok(states)
}

/// Exact count of configurations per aggregated power value, `c(P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationHistogram {
    counts: Vec<(Watts, u128)>,
    total_states: u128,
}

impl OccupationHistogram {
    fn from_pairs(counts: Vec<(Watts, u128)>) -> Self {
        let total_states = counts.iter().map(|&(_, c)| c).sum();
        Self {
            counts,
            total_states,
        }
    }

    /// Occupied power values in increasing order with their counts.
    pub fn counts(&self) -> &[(Watts, u128)] {
        &self.counts
    }

    pub fn count(&self, power: Watts) -> u128 {
        self.counts
            .binary_search_by_key(&power, |&(p, _)| p)
            .map_or(0, |i| self.counts[i].1)
    }

    /// `M`.
    pub fn total_states(&self) -> u128 {
        self.total_states
    }

    pub fn occupied_values(&self) -> usize {
        self.counts.len()
    }

    pub fn max_count(&self) -> u128 {
        self.counts.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }

    /// `ĉ = M / (number of occupied power values)`.
    pub fn average_occupation(&self) -> f64 {
        self.total_states as f64 / self.counts.len() as f64
    }

    /// True when every configuration has a distinct aggregated power.
    pub fn is_injective(&self) -> bool {
        self.counts.iter().all(|&(_, c)| c == 1)
    }

    /// `c(P) / M` for every occupied value.
    pub fn probabilities(&self) -> Vec<(Watts, f64)> {
        let m = self.total_states as f64;
        self.counts
            .iter()
            .map(|&(p, c)| (p, c as f64 / m))
            .collect()
    }
}

/// Occupation numbers via the convolution engine (counting mode).
pub fn occupation_histogram(set: &DeviceSet) -> Result<OccupationHistogram> {
    occupation_histogram_with_cap(set, DEFAULT_AXIS_CAP)
}

pub fn occupation_histogram_with_cap(
    set: &DeviceSet,
    axis_cap: u64,
) -> Result<OccupationHistogram> {
    let dense: Vec<u128> = convolve::fold(set, axis_cap, |_, _| 1u128)?;
    let counts = dense
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .map(|(p, c)| (p as Watts, c))
        .collect();
    Ok(OccupationHistogram::from_pairs(counts))
}

/// Occupation numbers by walking all `M` configurations. Refuses sets with
/// more than `cap` configurations.
pub fn enumerate_occupation(set: &DeviceSet, cap: u64) -> Result<OccupationHistogram> {
    check_cap(set, cap)?;
    let mut counts: BTreeMap<Watts, u128> = BTreeMap::new();
    let mut walk = StateWalk::new(set);
    while let Some((_, power)) = walk.current() {
        *counts.entry(power).or_insert(0) += 1;
        walk.advance();
    }
    Ok(OccupationHistogram::from_pairs(
        counts.into_iter().collect(),
    ))
}

pub fn average_occupation(hist: &OccupationHistogram) -> f64 {
    hist.average_occupation()
}

/// Number of configurations with `z` devices on, for `z = 0..=n`, in an
/// all on-off set of `n` devices: the binomial row `C(n, z)`.
pub fn states_by_z(n: usize) -> Result<Vec<u128>> {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        for w in row.windows(2) {
            next.push(w[0].checked_add(w[1]).ok_or(Error::CountOverflow)?);
        }
        next.push(1);
        row = next;
    }
    Ok(row)
}

/// `Σ_k P_k` over all configurations, by enumeration. Together with `M`
/// this gives the exact mean state power.
pub fn state_power_sum(set: &DeviceSet, cap: u64) -> Result<u128> {
    check_cap(set, cap)?;
    let mut sum = 0u128;
    let mut walk = StateWalk::new(set);
    while let Some((_, power)) = walk.current() {
        sum += power as u128;
        walk.advance();
    }
    Ok(sum)
}
