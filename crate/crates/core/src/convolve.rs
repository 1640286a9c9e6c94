//! Dense fold of per-device weights along the integer power axis.
//!
//! Cost is `O(S * P_total)` regardless of `M`, which is what makes sets like
//! B2x (`M = 39366`, `P_total = 1023`) cheap.

use alloc::vec;
use alloc::vec::Vec;

use crate::device_model::DeviceSet;
use crate::error::{Error, Result};

/// Largest power axis (`P_total + 1` entries) the dense engine allocates.
pub const DEFAULT_AXIS_CAP: u64 = 1 << 24;

pub(crate) trait Weight: Copy {
    const ZERO: Self;
    const ONE: Self;
    fn is_zero(self) -> bool;
    /// `acc + a * b`, `None` on overflow.
    fn mul_add(acc: Self, a: Self, b: Self) -> Option<Self>;
}

impl Weight for u128 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn is_zero(self) -> bool {
        self == 0
    }
    fn mul_add(acc: Self, a: Self, b: Self) -> Option<Self> {
        a.checked_mul(b).and_then(|x| acc.checked_add(x))
    }
}

impl Weight for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn is_zero(self) -> bool {
        self == 0.0
    }
    fn mul_add(acc: Self, a: Self, b: Self) -> Option<Self> {
        Some(acc + a * b)
    }
}

/// Returns the dense vector `w[P]` for `P` in `0..=P_total`, where each
/// configuration contributes the product of `weight(d, state_d)`.
pub(crate) fn fold<W, F>(set: &DeviceSet, axis_cap: u64, weight: F) -> Result<Vec<W>>
where
    W: Weight,
    F: Fn(usize, usize) -> W,
{
    let len = set.total_power() as u128 + 1;
    if len > axis_cap as u128 {
        return Err(Error::AxisTooLarge {
            len: u64::try_from(len).unwrap_or(u64::MAX),
            cap: axis_cap,
        });
    }
    let len = len as usize;
    let mut acc = vec![W::ZERO; len];
    let mut next = vec![W::ZERO; len];
    acc[0] = W::ONE;
    let mut reach = 0usize;
    for (d, device) in set.devices().iter().enumerate() {
        next[..=reach + device.max_power() as usize].fill(W::ZERO);
        for state in 0..device.state_count() {
            let w = weight(d, state);
            if w.is_zero() {
                continue;
            }
            let shift = device.power(state) as usize;
            for p in 0..=reach {
                let a = acc[p];
                if a.is_zero() {
                    continue;
                }
                let slot = &mut next[p + shift];
                *slot = W::mul_add(*slot, a, w).ok_or(Error::CountOverflow)?;
            }
        }
        reach += device.max_power() as usize;
        core::mem::swap(&mut acc, &mut next);
    }
    Ok(acc)
}
