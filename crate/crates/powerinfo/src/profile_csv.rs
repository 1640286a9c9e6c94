//! Load-profile CSV: header `t_s,power_w`, one row per sample.
//!
//! `t_s` is the sample time in seconds (`i * dt`); `power_w` an integer in
//! watts. On read, the interval is taken from the first two rows and every
//! later row must keep that spacing. A single-row profile gets `dt = 1`.

use std::io::{Read, Write};
use std::path::Path;

use powerinfo_core::LoadProfile;

use crate::error::{Error, Result};

const HEADER: [&str; 2] = ["t_s", "power_w"];

pub fn write_profile<W: Write>(profile: &LoadProfile, out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for (i, p) in profile.samples().iter().enumerate() {
        w.write_record([(i as f64 * profile.dt()).to_string(), p.to_string()])?;
    }
    w.flush()
}

fn parse_error(origin: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: origin.to_path_buf(),
        line: line as usize,
        column: 1,
        message: message.into(),
    }
}

pub fn read_profile<R: Read>(input: R, origin: &Path) -> Result<LoadProfile> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r
        .headers()
        .map_err(|e| parse_error(origin, 1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(parse_error(origin, 1, "expected header `t_s,power_w`"));
    }
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(origin, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let t: f64 = record[0]
            .trim()
            .parse()
            .map_err(|_| parse_error(origin, line, format!("invalid time `{}`", &record[0])))?;
        let p: u64 = record[1].trim().parse().map_err(|_| {
            parse_error(
                origin,
                line,
                format!("power must be a non-negative integer, got `{}`", &record[1]),
            )
        })?;
        times.push((line, t));
        samples.push(p);
    }
    if samples.is_empty() {
        return Err(parse_error(origin, 1, "profile has no samples"));
    }
    let dt = if times.len() > 1 {
        times[1].1 - times[0].1
    } else {
        1.0
    };
    if !(dt > 0.0) {
        return Err(parse_error(origin, times[1].0, "time must increase"));
    }
    let t0 = times[0].1;
    for (i, &(line, t)) in times.iter().enumerate() {
        let expected = t0 + i as f64 * dt;
        if (t - expected).abs() > 1e-6 * dt.max(expected.abs()) {
            return Err(parse_error(origin, line, "non-uniform sampling interval"));
        }
    }
    Ok(LoadProfile::new(samples, dt)?)
}

pub fn load_profile(path: impl AsRef<Path>) -> Result<LoadProfile> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_profile(file, path)
}

pub fn save_profile(profile: &LoadProfile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_profile(profile, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
