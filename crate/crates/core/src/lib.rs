//! Information content of aggregated appliance power values.
//!
//! A device set is a list of appliances, each with one or more discrete
//! on-state power values and an implicit off state at 0 W. Every assignment
//! of a state to every device is a configuration; the smart meter only sees
//! the sum of the selected power values. This crate quantifies how much of
//! the configuration information survives that summation:
//!
//! | Quantity | Meaning |
//! |----------|---------|
//! | `M` | number of configurations, `Π (ŝ_d + 1)` |
//! | `c(P)` | occupation number: configurations mapping to power `P` |
//! | `ĉ` | mean occupation over occupied power values |
//! | `H` | source entropy of the configuration distribution (bits) |
//! | `I^P` | entropy of the aggregated power distribution (bits) |
//! | `C` | proficiency (uncertainty coefficient) `I^P / H` |
//!
//! Two engines compute power distributions. The engine of record folds the
//! per-device distributions by convolution along the integer power axis;
//! [`state_space::enumerate_occupation`] and
//! [`probability::enumerate_power_distribution`] walk every configuration
//! and exist as exact oracles.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the golden-table checks live in the `powerinfo` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod catalog;
mod convolve;
pub mod device_model;
mod error;
pub mod information;
pub mod probability;
pub mod profile;
pub mod state_space;

pub use catalog::{catalog, lookup, CatalogEntry};
pub use device_model::{Device, DeviceSet, Watts};
pub use error::{Error, Result};
pub use information::{InfoReport, SweepRow};
pub use probability::{DeviceProbabilities, PowerDistribution};
pub use profile::{LoadProfile, PHatEstimate};
pub use state_space::{OccupationHistogram, StateDigits};
