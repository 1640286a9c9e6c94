//! Device-set files.
//!
//! ```json
//! {"name": "kitchen", "devices": [[60], [80, 1725], [90, 173, 1910]]}
//! ```
//!
//! Exactly these two fields; power values are positive integers in watts.
//! On load, on-states within a device and devices within the set are sorted
//! (devices by their highest on-state); duplicate on-states are rejected.

use std::fs;
use std::path::Path;

use powerinfo_core::DeviceSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceSetFile {
    name: String,
    devices: Vec<Vec<u64>>,
}

pub fn parse_device_set(text: &str, origin: &Path) -> Result<DeviceSet> {
    let file: DeviceSetFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(DeviceSet::from_power_lists(file.name, file.devices)?)
}

pub fn load_device_set(path: impl AsRef<Path>) -> Result<DeviceSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_device_set(&text, path)
}

pub fn device_set_to_json(set: &DeviceSet) -> String {
    let file = DeviceSetFile {
        name: set.name().to_owned(),
        devices: set
            .devices()
            .iter()
            .map(|d| d.on_states().to_vec())
            .collect(),
    };
    let mut text = serde_json::to_string(&file).expect("device set serializes");
    text.push('\n');
    text
}

pub fn save_device_set(set: &DeviceSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, device_set_to_json(set)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<DeviceSet> {
        parse_device_set(text, Path::new("test.json"))
    }

    #[test]
    fn on_off_file() {
        let set = parse(r#"{"name":"x","devices":[[5],[10]]}"#).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.is_on_off());
        assert_eq!(set.name(), "x");
    }

    #[test]
    fn sorts_devices_and_states() {
        let set = parse(r#"{"name":"x","devices":[[30, 20],[10]]}"#).unwrap();
        assert_eq!(set.devices()[0].on_states(), &[10]);
        assert_eq!(set.devices()[1].on_states(), &[20, 30]);
    }

    #[test]
    fn rejects_duplicates() {
        let err = parse(r#"{"name":"x","devices":[[10,10]]}"#).unwrap_err();
        assert!(
            err.to_string().contains("non-increasing on-states"),
            "{err}"
        );
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn rejects_bad_input_with_position() {
        let err = parse("{\"name\":\"x\",\n\"devices\":[[5.5]]}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse(r#"{"name":"x","devices":[[5]],"extra":1}"#),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse(r#"{"name":"x","devices":[[-5]]}"#),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse(r#"{"name":"x","devices":[[0]]}"#),
            Err(Error::Core(powerinfo_core::Error::ZeroPower { device: 0 }))
        ));
        assert!(matches!(
            parse(r#"{"name":"x","devices":[]}"#),
            Err(Error::Core(powerinfo_core::Error::EmptySet))
        ));
    }
}
