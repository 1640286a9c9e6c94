//! Appliances, device sets and their scalar characteristics.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Power in watts. Power values are discrete integers.
pub type Watts = u64;

/// One appliance: a strictly increasing list of positive on-state power
/// values. State 0 is the implicit off state at 0 W; state `s >= 1` draws
/// `on_states[s - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Device {
    on_states: Vec<Watts>,
}

impl Device {
    /// Validates an already sorted list of on-state powers.
    pub fn new(on_states: Vec<Watts>) -> Result<Self> {
        Self::validated(on_states, 0)
    }

    /// Sorts the on-states first; duplicates are still rejected.
    pub fn from_unsorted(mut on_states: Vec<Watts>) -> Result<Self> {
        on_states.sort_unstable();
        Self::new(on_states)
    }

    pub fn on_off(power: Watts) -> Result<Self> {
        Self::new(alloc::vec![power])
    }

    fn validated(on_states: Vec<Watts>, device: usize) -> Result<Self> {
        if on_states.is_empty() {
            return Err(Error::EmptyDevice { device });
        }
        if on_states.contains(&0) {
            return Err(Error::ZeroPower { device });
        }
        if on_states.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasing { device });
        }
        Ok(Self { on_states })
    }

    pub fn on_states(&self) -> &[Watts] {
        &self.on_states
    }

    /// Number of on-states, `ŝ_d`.
    pub fn on_state_count(&self) -> usize {
        self.on_states.len()
    }

    /// Number of states including off, `ŝ_d + 1`.
    pub fn state_count(&self) -> usize {
        self.on_states.len() + 1
    }

    pub fn max_power(&self) -> Watts {
        // non-empty by construction
        self.on_states[self.on_states.len() - 1]
    }

    /// Power drawn in state `state` (0 = off). Panics if `state > ŝ_d`.
    pub fn power(&self, state: usize) -> Watts {
        if state == 0 {
            0
        } else {
            self.on_states[state - 1]
        }
    }

    /// Mean over the on-states, `⟨P_d⟩`.
    pub fn mean_on_power(&self) -> f64 {
        let sum: u128 = self.on_states.iter().map(|&p| p as u128).sum();
        sum as f64 / self.on_states.len() as f64
    }

    pub fn is_on_off(&self) -> bool {
        self.on_states.len() == 1
    }
}

/// A named, non-empty collection of devices ordered by their maximal
/// on-state power (ties keep input order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeviceSet {
    name: String,
    devices: Vec<Device>,
}

impl DeviceSet {
    /// Stable-sorts `devices` by maximal power. Fails on an empty list or
    /// when the sum of all maxima does not fit in 64 bits.
    pub fn new(name: impl Into<String>, mut devices: Vec<Device>) -> Result<Self> {
        if devices.is_empty() {
            return Err(Error::EmptySet);
        }
        devices.sort_by_key(Device::max_power);
        devices
            .iter()
            .try_fold(0u64, |acc, d| acc.checked_add(d.max_power()))
            .ok_or(Error::PowerOverflow)?;
        Ok(Self {
            name: name.into(),
            devices,
        })
    }

    /// Builds a set from raw on-state lists, sorting each list. Validation
    /// errors report the device's position in `raw`.
    pub fn from_power_lists<I, D>(name: impl Into<String>, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: IntoIterator<Item = Watts>,
    {
        let devices = raw
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                let mut v: Vec<Watts> = d.into_iter().collect();
                v.sort_unstable();
                Device::validated(v, i)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, devices)
    }

    /// All on-off devices with the given powers.
    pub fn on_off(name: impl Into<String>, powers: &[Watts]) -> Result<Self> {
        Self::from_power_lists(name, powers.iter().map(|&p| [p]))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    /// Number of devices, `N`.
    pub fn len(&self) -> usize {
        self.devices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_on_off(&self) -> bool {
        self.devices.iter().all(Device::is_on_off)
    }

    /// Aggregated power with every device at its highest state, `P_total`.
    pub fn total_power(&self) -> Watts {
        // checked at construction
        self.devices.iter().map(Device::max_power).sum()
    }

    /// Number of configurations `M = Π (ŝ_d + 1)`.
    pub fn state_count(&self) -> Result<u64> {
        self.devices
            .iter()
            .try_fold(1u64, |acc, d| acc.checked_mul(d.state_count() as u64))
            .ok_or(Error::StateCountOverflow)
    }

    /// Number of on-state power values `S = Σ ŝ_d`; equals `N` for on-off sets.
    pub fn power_value_count(&self) -> usize {
        self.devices.iter().map(Device::on_state_count).sum()
    }

    /// `S + N`: power values counted together with each device's off state.
    pub fn power_value_count_with_off(&self) -> usize {
        self.power_value_count() + self.len()
    }

    /// `P_av = (1/N) Σ ⟨P_d⟩`.
    pub fn average_set_power(&self) -> f64 {
        self.summed_mean_power() / self.len() as f64
    }

    /// `Σ ⟨P_d⟩`, the expected aggregated power when every device is on
    /// with its on-states equally likely.
    pub fn summed_mean_power(&self) -> f64 {
        self.devices.iter().map(Device::mean_on_power).sum()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// On-off devices with a linear power spectrum: `P_1 = p1`,
/// `P_d = P_{d-1} + p_delta`.
pub fn linear_set(n: usize, p1: Watts, p_delta: Watts) -> Result<DeviceSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("device count must be at least 1"));
    }
    if p1 == 0 {
        return Err(Error::InvalidParameter(
            "first power value must be positive",
        ));
    }
    let mut powers = Vec::with_capacity(n);
    let mut p = p1;
    for i in 0..n {
        if i > 0 {
            p = p.checked_add(p_delta).ok_or(Error::PowerOverflow)?;
        }
        powers.push(p);
    }
    DeviceSet::on_off("linear", &powers)
}

/// On-off devices following `P_d = round(alpha * P_{d-1})`, `P_1 = p1`.
///
/// Rounding is applied to the running integer value at each step, so the
/// result differs from `round(p1 * alpha^(d-1))` in general.
pub fn powerlaw_set(n: usize, alpha: f64, p1: Watts) -> Result<DeviceSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("device count must be at least 1"));
    }
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter("ratio must be a finite value >= 1"));
    }
    if p1 == 0 {
        return Err(Error::InvalidParameter(
            "first power value must be positive",
        ));
    }
    let mut powers: Vec<Watts> = Vec::with_capacity(n);
    let mut p = p1;
    powers.push(p);
    for _ in 1..n {
        let next = libm::round(alpha * p as f64);
        if !(next < u64::MAX as f64) {
            return Err(Error::PowerOverflow);
        }
        let next = next as Watts;
        if next == p {
            return Err(Error::DuplicatePower { value: next });
        }
        p = next;
        powers.push(p);
    }
    DeviceSet::on_off("powerlaw", &powers)
}
