//! Entropy, mutual information of power values, proficiency and sweeps.
//!
//! All logarithms are binary; results are in bits.

use alloc::vec::Vec;

use crate::device_model::{DeviceSet, Watts};
use crate::error::{Error, Result};
use crate::probability::{
    self, power_distribution, uniform_model, DeviceProbabilities, PowerDistribution,
    NORMALIZATION_TOLERANCE,
};
use crate::state_space::{occupation_histogram, StateWalk};

/// Slack for comparisons such as `I^P <= H` that hold exactly in real
/// arithmetic but are computed along different summation orders.
const BITS_SLACK: f64 = 1e-9;

/// `-p ld p`, with `0 ld 0 = 0`.
pub fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        0.0 - p * libm::log2(p)
    } else {
        0.0
    }
}

fn entropy_of(masses: impl IntoIterator<Item = f64>) -> f64 {
    masses.into_iter().map(entropy_term).sum()
}

/// Shannon entropy of a probability vector. Rejects negative or
/// non-finite masses and sums further than 1e-9 from 1.
pub fn entropy(masses: &[f64]) -> Result<f64> {
    if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
        return Err(Error::InvalidParameter(
            "masses must be finite and non-negative",
        ));
    }
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized(total));
    }
    Ok(entropy_of(masses.iter().copied()))
}

/// Entropy of the joint configuration distribution. Devices are
/// independent, so this is the sum of the per-device state entropies.
pub fn source_entropy(set: &DeviceSet, model: &DeviceProbabilities) -> Result<f64> {
    if !model.matches(set) {
        return Err(Error::ShapeMismatch);
    }
    Ok((0..set.len()).map(|d| entropy_of(model.states(d))).sum())
}

/// Entropy of the joint configuration distribution summed over all `M`
/// configurations. Slow; used to cross-check [`source_entropy`].
pub fn enumerate_source_entropy(
    set: &DeviceSet,
    model: &DeviceProbabilities,
    cap: u64,
) -> Result<f64> {
    if !model.matches(set) {
        return Err(Error::ShapeMismatch);
    }
    let states = set.state_count()?;
    if states > cap {
        return Err(Error::EnumerationCap { states, cap });
    }
    let mut h = 0.0;
    let mut walk = StateWalk::new(set);
    while let Some((digits, _)) = walk.current() {
        let p: f64 = digits
            .iter()
            .enumerate()
            .map(|(d, &s)| model.state(d, s))
            .product();
        h += entropy_term(p);
        walk.advance();
    }
    Ok(h)
}

fn binomial(n: usize, z: usize) -> f64 {
    let z = z.min(n - z);
    (0..z).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Entropy contributed by the `C(n, z)` configurations with `z` of `n`
/// on-off devices on: `-C(n, z) p_k(z) ld p_k(z)`.
pub fn h_of_z(n: usize, p_hat: f64, z: usize) -> f64 {
    let pk = probability::z_state_probability(n, z, p_hat);
    binomial(n, z) * entropy_term(pk)
}

/// `I^P = -Σ_j p(P_j) ld p(P_j)`.
pub fn mutual_information(dist: &PowerDistribution) -> f64 {
    entropy_of(dist.masses().iter().map(|&(_, m)| m))
}

/// Per-power-value terms `h^P(P_j)` whose sum is [`mutual_information`].
pub fn power_entropy_terms(dist: &PowerDistribution) -> Vec<(Watts, f64)> {
    dist.masses()
        .iter()
        .map(|&(p, m)| (p, entropy_term(m)))
        .collect()
}

/// Uncertainty coefficient `C = I^P / H`.
pub fn proficiency(entropy: f64, mutual_information: f64) -> Result<f64> {
    if !(entropy > 0.0) {
        return Err(Error::ZeroEntropy);
    }
    if !(mutual_information >= 0.0) || mutual_information > entropy + BITS_SLACK {
        return Err(Error::InvalidParameter(
            "mutual information must lie in [0, H]",
        ));
    }
    Ok((mutual_information / entropy).min(1.0))
}

/// Information measures of a device set, for one probability model and
/// for the maximum-entropy case.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoReport {
    /// Source entropy `H` under the chosen model.
    pub entropy: f64,
    /// `H_max = ld M`.
    pub max_entropy: f64,
    /// `I^P` under the chosen model.
    pub mutual_information: f64,
    /// `I^P_max`, mutual information when all configurations are equally likely.
    pub max_mutual_information: f64,
    /// `C = I^P / H`; `None` when `H = 0`.
    pub proficiency: Option<f64>,
    pub max_proficiency: f64,
    /// `ĉ`.
    pub average_occupation: f64,
    /// `1 - ld(ĉ) / H_max`, an upper bound on `C_max`.
    pub max_proficiency_bound: f64,
    pub state_count: u64,
    pub occupied_values: usize,
}

struct MaxEntropyPart {
    max_entropy: f64,
    max_mutual_information: f64,
    average_occupation: f64,
    state_count: u64,
    occupied_values: usize,
}

fn max_entropy_part(set: &DeviceSet) -> Result<MaxEntropyPart> {
    let state_count = set.state_count()?;
    let hist = occupation_histogram(set)?;
    let max_entropy = libm::log2(state_count as f64);
    let max_mutual_information = entropy_of(hist.probabilities().into_iter().map(|(_, m)| m));
    Ok(MaxEntropyPart {
        max_entropy,
        max_mutual_information,
        average_occupation: hist.average_occupation(),
        state_count,
        occupied_values: hist.occupied_values(),
    })
}

impl MaxEntropyPart {
    fn into_report(self, entropy: f64, mutual_information: f64) -> InfoReport {
        // H_max >= 1 because every device has at least two states
        let max_proficiency = self.max_mutual_information / self.max_entropy;
        let max_proficiency_bound = 1.0 - libm::log2(self.average_occupation) / self.max_entropy;
        debug_assert!(max_proficiency <= max_proficiency_bound + BITS_SLACK);
        InfoReport {
            entropy,
            max_entropy: self.max_entropy,
            mutual_information,
            max_mutual_information: self.max_mutual_information,
            proficiency: proficiency(entropy, mutual_information).ok(),
            max_proficiency,
            average_occupation: self.average_occupation,
            max_proficiency_bound,
            state_count: self.state_count,
            occupied_values: self.occupied_values,
        }
    }
}

/// Report for the maximum-entropy case, where `H = H_max` and `I^P = I^P_max`.
pub fn max_entropy_report(set: &DeviceSet) -> Result<InfoReport> {
    let part = max_entropy_part(set)?;
    let (h, ip) = (part.max_entropy, part.max_mutual_information);
    Ok(part.into_report(h, ip))
}

/// Report for an arbitrary model; the `max_*` fields still describe the
/// maximum-entropy case.
pub fn model_report(set: &DeviceSet, model: &DeviceProbabilities) -> Result<InfoReport> {
    let h = source_entropy(set, model)?;
    let ip = mutual_information(&power_distribution(set, model)?);
    Ok(max_entropy_part(set)?.into_report(h, ip))
}

/// One point of a device-probability sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p_hat: f64,
    pub entropy: f64,
    pub mutual_information: f64,
    /// `None` where `H = 0`.
    pub proficiency: Option<f64>,
}

/// `H`, `I^P` and `C` under [`uniform_model`] for each grid value, in grid order.
pub fn sweep(set: &DeviceSet, grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&p_hat| {
            let model = uniform_model(set, p_hat)?;
            let entropy = source_entropy(set, &model)?;
            let mutual_information = mutual_information(&power_distribution(set, &model)?);
            Ok(SweepRow {
                p_hat,
                entropy,
                mutual_information,
                proficiency: proficiency(entropy, mutual_information).ok(),
            })
        })
        .collect()
}

/// Evenly spaced values `start, start + step, ...` up to and including
/// `stop` (with a small tolerance), rounded to 12 decimals so that values
/// like 0.15 print cleanly.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(Error::InvalidParameter(
            "grid needs start <= stop and step > 0",
        ));
    }
    let count = libm::floor((stop - start) / step + 1e-9) as usize + 1;
    Ok((0..count)
        .map(|i| libm::round((start + i as f64 * step) * 1e12) / 1e12)
        .collect())
}

/// `0.05, 0.10, ..., 0.95`.
pub fn default_grid() -> Vec<f64> {
    grid(0.05, 0.95, 0.05).expect("static grid is valid")
}

/// Grid value with the largest entropy (first one on ties).
pub fn entropy_argmax(rows: &[SweepRow]) -> Option<SweepRow> {
    rows.iter().copied().fold(None, |best, r| match best {
        Some(b) if b.entropy >= r.entropy => Some(b),
        _ => Some(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device_model::linear_set;
    use crate::state_space::DEFAULT_ENUMERATION_CAP;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn basic_entropies() {
        assert_eq!(entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert!(close(
            entropy(&vec![1.0 / 1024.0; 1024]).unwrap(),
            10.0,
            1e-12
        ));
        assert_eq!(entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(entropy(&[0.5, 0.4]), Err(Error::NotNormalized(_))));
        assert!(entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn ten_device_source_entropy() {
        let set = linear_set(10, 5, 5).unwrap();
        let h = |p| source_entropy(&set, &uniform_model(&set, p).unwrap()).unwrap();
        assert!(close(h(0.1), 4.69, 0.005));
        assert!(close(h(0.3), 8.81, 0.005));
        assert!(close(h(0.5), 10.0, 1e-12));
        assert!(close(h(0.7), h(0.3), 1e-12));
    }

    #[test]
    fn source_entropy_matches_enumeration() {
        let set = DeviceSet::from_power_lists("x", [vec![1, 4], vec![2], vec![3, 5, 6]]).unwrap();
        let model = uniform_model(&set, 0.35).unwrap();
        let a = source_entropy(&set, &model).unwrap();
        let b = enumerate_source_entropy(&set, &model, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(close(a, b, 1e-12));
    }

    #[test]
    fn h_of_z_values() {
        assert!(close(h_of_z(10, 0.5, 5), 2.4609375, 1e-12));
        assert!(close(h_of_z(10, 0.1, 1), 1.81699, 5e-6));
        assert_eq!(h_of_z(0, 0.3, 0), 0.0);
        let total: f64 = (0..=10).map(|z| h_of_z(10, 0.3, z)).sum();
        let set = linear_set(10, 1, 1).unwrap();
        let h = source_entropy(&set, &uniform_model(&set, 0.3).unwrap()).unwrap();
        assert!(close(total, h, 1e-9));
    }

    #[test]
    fn proficiency_errors() {
        assert_eq!(proficiency(0.0, 0.0), Err(Error::ZeroEntropy));
        assert!(proficiency(1.0, 1.5).is_err());
        assert_eq!(proficiency(2.0, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn set_a_reports() {
        let a = linear_set(10, 5, 5).unwrap();
        let r = max_entropy_report(&a).unwrap();
        assert!(close(r.max_mutual_information, 5.33, 0.01));
        assert!(close(r.max_proficiency, 0.53, 0.01));
        assert!(close(r.average_occupation, 18.3, 0.05));
        assert!(r.max_proficiency <= r.max_proficiency_bound);
        assert_eq!(r.proficiency, Some(r.max_proficiency));

        let r = model_report(&a, &uniform_model(&a, 0.1).unwrap()).unwrap();
        assert!(close(r.proficiency.unwrap(), 0.79, 0.01));
        let r = model_report(&a, &uniform_model(&a, 0.5).unwrap()).unwrap();
        assert!(close(r.mutual_information, 5.33, 0.01));
        let r = model_report(&a, &uniform_model(&a, 0.0).unwrap()).unwrap();
        assert_eq!(r.entropy, 0.0);
        assert_eq!(r.proficiency, None);
    }

    #[test]
    fn grids() {
        let g = default_grid();
        assert_eq!(g.len(), 19);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[2], 0.15);
        assert_eq!(g[18], 0.95);
        assert_eq!(grid(0.0, 1.0, 0.5).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(grid(0.5, 0.1, 0.1).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn binary_set_sweep() {
        let b2 = DeviceSet::on_off("b2", &(0..10).map(|i| 1u64 << i).collect::<Vec<_>>()).unwrap();
        let rows = sweep(&b2, &default_grid()).unwrap();
        for r in &rows {
            assert!(close(r.entropy, r.mutual_information, 1e-9));
        }
        let best = entropy_argmax(&rows).unwrap();
        assert_eq!(best.p_hat, 0.5);
        assert!(close(best.entropy, 10.0, 1e-12));
    }
}
