//! Standard-library companion to `powerinfo-core`: device-set, model and
//! profile files, the published-table checks, and the `powerinfo` CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod device_file;
mod error;
pub mod fmt;
pub mod model_file;
pub mod profile_csv;
pub mod tables;

pub use error::{Error, Result};
pub use powerinfo_core as core;
