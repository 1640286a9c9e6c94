//! Embedded device sets: the artificial sets A, B, B2, B2+ and B2x, and
//! six-appliance sets from the GreenD, RedD and Eco datasets (three houses
//! each).
//!
//! The real-house power states were extracted from sub-metered data by a
//! state-detection algorithm (Egarter et al., 2015); they are reproduced
//! here as published, not re-derived from raw measurements.

use alloc::vec::Vec;

use crate::device_model::{DeviceSet, Watts};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub set: DeviceSet,
    pub provenance: &'static str,
}

const ARTIFICIAL: &str = "artificial set";
const EGARTER: &str = "appliance power states per Egarter et al. (2015)";

const SET_B: &[Watts] = &[1, 2, 3, 5, 8, 14, 24, 41, 69, 117];

const GREEND1: &[&[Watts]] = &[
    &[55, 140, 240],
    &[1220],
    &[60, 148, 470, 570, 1225, 1265],
    &[1790],
    &[70, 155, 210, 260, 423, 1898],
    &[40, 1900],
];
const GREEND2: &[&[Watts]] = &[&[60], &[80], &[850], &[1580], &[80, 1725], &[90, 173, 1910]];
const GREEND3: &[&[Watts]] = &[
    &[110, 235, 285, 360],
    &[120, 1235],
    &[55, 125, 540, 882, 1047, 1220, 1630],
    &[70, 2002],
    &[125, 245, 358, 1998, 2100],
    &[70, 160, 2358, 2550],
];
const REDD1: &[&[Watts]] = &[
    &[200, 420],
    &[50, 210, 410, 890, 1115],
    &[260, 710, 1440],
    &[55, 110, 270, 300, 620, 1405, 1505],
    &[1680, 2478],
    &[2705],
];
const REDD2: &[&[Watts]] = &[
    &[123],
    &[410],
    &[160, 420],
    &[130, 210, 770],
    &[1050],
    &[40, 1718, 1850],
];
const REDD3: &[&[Watts]] = &[
    &[100, 400],
    &[210, 525, 730],
    &[40, 365, 900, 1220, 1520],
    &[860, 960, 1285, 1605],
    &[120, 540, 1698],
    &[2265],
];
const ECO1: &[&[Watts]] = &[
    &[40],
    &[72],
    &[250, 440, 785],
    &[50, 1225],
    &[1800],
    &[90, 180, 250, 365, 2168],
];
const ECO2: &[&[Watts]] = &[
    &[70],
    &[55, 175],
    &[80, 185],
    &[50, 310],
    &[50, 1840],
    &[120, 2132],
];
const ECO3: &[&[Watts]] = &[
    &[100],
    &[120],
    &[130],
    &[100, 175, 280],
    &[40, 1365, 1485],
    &[67, 190, 280, 445, 650, 785, 1065, 1545],
];

/// Catalog keys in listing order.
pub const KEYS: [&str; 14] = [
    "a", "b", "b2", "b2plus", "b2x", "greend1", "greend2", "greend3", "redd1", "redd2", "redd3",
    "eco1", "eco2", "eco3",
];

fn from_lists(key: &str, lists: &[&[Watts]]) -> Result<DeviceSet> {
    DeviceSet::from_power_lists(key, lists.iter().map(|d| d.iter().copied()))
}

fn binary_powers() -> impl Iterator<Item = Watts> {
    (0..10).map(|i| 1 << i)
}

fn build(key: &'static str) -> Option<CatalogEntry> {
    let (set, provenance) = match key {
        // P_1 = P_delta = 5 W
        "a" => (
            DeviceSet::on_off("a", &(1..=10).map(|i| 5 * i).collect::<Vec<_>>()),
            ARTIFICIAL,
        ),
        "b" => (DeviceSet::on_off("b", SET_B), ARTIFICIAL),
        "b2" => (
            DeviceSet::on_off("b2", &binary_powers().collect::<Vec<_>>()),
            ARTIFICIAL,
        ),
        // B2 whose tenth device also takes the power values of devices 1..9
        "b2plus" => (
            DeviceSet::from_power_lists(
                "b2plus",
                binary_powers()
                    .take(9)
                    .map(|p| Vec::from([p]))
                    .chain(core::iter::once(binary_powers().collect())),
            ),
            ARTIFICIAL,
        ),
        // B2 where devices 2..10 gain a second state at the previous device's power
        "b2x" => (
            DeviceSet::from_power_lists(
                "b2x",
                core::iter::once(Vec::from([1]))
                    .chain((1..10).map(|i| Vec::from([1 << (i - 1), 1 << i]))),
            ),
            ARTIFICIAL,
        ),
        "greend1" => (from_lists(key, GREEND1), EGARTER),
        "greend2" => (from_lists(key, GREEND2), EGARTER),
        "greend3" => (from_lists(key, GREEND3), EGARTER),
        "redd1" => (from_lists(key, REDD1), EGARTER),
        "redd2" => (from_lists(key, REDD2), EGARTER),
        "redd3" => (from_lists(key, REDD3), EGARTER),
        "eco1" => (from_lists(key, ECO1), EGARTER),
        "eco2" => (from_lists(key, ECO2), EGARTER),
        "eco3" => (from_lists(key, ECO3), EGARTER),
        _ => return None,
    };
    Some(CatalogEntry {
        key,
        set: set.expect("embedded catalog data is valid"),
        provenance,
    })
}

/// All embedded sets in [`KEYS`] order.
pub fn catalog() -> Vec<CatalogEntry> {
    KEYS.iter().filter_map(|k| build(k)).collect()
}

/// Looks up an entry by key (case-insensitive).
pub fn lookup(key: &str) -> Option<CatalogEntry> {
    KEYS.iter()
        .find(|k| k.eq_ignore_ascii_case(key))
        .and_then(|k| build(k))
}
