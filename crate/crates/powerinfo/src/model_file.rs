//! Probability-model files.
//!
//! Either a single average device probability, `{"p_hat": 0.3}`, split
//! equally over each device's on-states, or explicit on-state probabilities
//! per device in set order, `{"per_device": [[0.1], [0.05, 0.02]]}`.

use std::fs;
use std::path::Path;

use powerinfo_core::probability::{uniform_model, DeviceProbabilities};
use powerinfo_core::DeviceSet;
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Uniform(UniformSpec),
    PerDevice(PerDeviceSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformSpec {
    pub p_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerDeviceSpec {
    pub per_device: Vec<Vec<f64>>,
}

impl ModelSpec {
    pub fn build(&self, set: &DeviceSet) -> Result<DeviceProbabilities> {
        Ok(match self {
            ModelSpec::Uniform(u) => uniform_model(set, u.p_hat)?,
            ModelSpec::PerDevice(p) => DeviceProbabilities::new(set, p.per_device.clone())?,
        })
    }
}

pub fn parse_model(text: &str, origin: &Path) -> Result<ModelSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use powerinfo_core::lookup;

    fn parse(text: &str) -> Result<ModelSpec> {
        parse_model(text, Path::new("model.json"))
    }

    #[test]
    fn both_forms() {
        assert_eq!(
            parse(r#"{"p_hat": 0.3}"#).unwrap(),
            ModelSpec::Uniform(UniformSpec { p_hat: 0.3 })
        );
        let set = lookup("greend2").unwrap().set;
        let spec = parse(r#"{"per_device": [[0.1],[0.2],[0.3],[0.4],[0.05,0.02],[0.1,0.1,0.1]]}"#)
            .unwrap();
        let model = spec.build(&set).unwrap();
        assert!((model.off(4) - 0.93).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatch() {
        let set = lookup("greend2").unwrap().set;
        let spec = parse(r#"{"per_device": [[0.1]]}"#).unwrap();
        assert!(matches!(
            spec.build(&set),
            Err(Error::Core(powerinfo_core::Error::ShapeMismatch))
        ));
        assert!(parse(r#"{"p_hat": 0.3, "x": 1}"#).is_err());
        assert!(ModelSpec::Uniform(UniformSpec { p_hat: 1.2 })
            .build(&set)
            .is_err());
    }
}
