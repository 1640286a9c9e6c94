//! Command-line interface.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use powerinfo_core::information::{self, grid, max_entropy_report, model_report, InfoReport};
use powerinfo_core::probability::{
    max_entropy_model, power_distribution, uniform_model, DeviceProbabilities,
};
use powerinfo_core::profile::{estimate_p_hat, synthesize};
use powerinfo_core::state_space::occupation_histogram;
use powerinfo_core::{catalog, lookup, DeviceSet};
use serde::Serialize;

use crate::device_file::load_device_set;
use crate::error::{Error, Result};
use crate::fmt::real;
use crate::model_file::load_model;
use crate::profile_csv::{load_profile, write_profile};
use crate::tables;

#[derive(Debug, Parser)]
#[command(
    name = "powerinfo",
    version,
    about = "Information content of aggregated appliance power values"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SetArg {
    /// Catalog key (see `list`) or path to a device-set JSON file.
    #[arg(long = "set", value_name = "KEY|PATH")]
    pub set: String,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct ModelArgs {
    /// Average device probability; split equally over each device's on-states.
    #[arg(long, value_name = "X")]
    pub p_hat: Option<f64>,
    /// Probability-model JSON file.
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// All configurations equally likely (the default).
    #[arg(long)]
    pub max_entropy: bool,
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the embedded device sets.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Scalar characteristics of a device set.
    Info {
        #[command(flatten)]
        set: SetArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Entropy, mutual information and proficiency under a model.
    Analyze {
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Occupation numbers and power-value probabilities.
    Occupation {
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// H, I_P and C over a grid of average device probabilities.
    Sweep {
        #[command(flatten)]
        set: SetArg,
        /// start:stop:step
        #[arg(long, default_value = "0.05:0.95:0.05")]
        grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Synthesize a seeded load profile (1 s interval).
    Synth {
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        model: ModelArgs,
        /// Number of samples.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Energy, average power and device-probability estimate of a profile.
    ProfileStats {
        /// Profile CSV (`t_s,power_w`).
        #[arg(long, value_name = "PATH")]
        profile: PathBuf,
        /// Device set used for the p_hat estimate.
        #[arg(long = "set", value_name = "KEY|PATH")]
        set: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Recompute the published tables and compare within tolerance.
    Tables {
        /// Only this table (2, 3, 4, 5 or 7).
        #[arg(long)]
        table: Option<u8>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
}

/// What a command produced: the artifact and the process exit status.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub destination: Option<PathBuf>,
    /// Set when the artifact was produced but the command still fails
    /// (golden-table mismatch).
    pub error: Option<Error>,
}

impl Outcome {
    fn ok(output: String, out: &OutArg) -> Self {
        Self {
            output,
            destination: out.out.clone(),
            error: None,
        }
    }
}

pub fn resolve_set(selector: &str) -> Result<DeviceSet> {
    if let Some(entry) = lookup(selector) {
        return Ok(entry.set);
    }
    let path = PathBuf::from(selector);
    if path.exists() {
        return load_device_set(&path);
    }
    Err(Error::Usage(format!(
        "`{selector}` is neither a catalog key nor an existing file"
    )))
}

/// Resolves the model selector; `None` means maximum entropy.
fn resolve_model(
    set: &DeviceSet,
    args: &ModelArgs,
) -> Result<Option<(String, DeviceProbabilities)>> {
    if let Some(p) = args.p_hat {
        return Ok(Some((format!("p_hat={}", real(p)), uniform_model(set, p)?)));
    }
    if let Some(path) = &args.model {
        let model = load_model(path)?.build(set)?;
        return Ok(Some((format!("file:{}", path.display()), model)));
    }
    Ok(None)
}

pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Usage(format!("invalid grid `{spec}`; expected start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let g = grid(v[0], v[1], v[2])?;
    if g.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Usage("grid values must lie in [0, 1]".to_owned()));
    }
    Ok(g)
}

fn opt_real(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_owned(), real)
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn aligned(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

#[derive(Serialize)]
struct ListRow<'a> {
    key: &'a str,
    devices: usize,
    #[serde(rename = "S")]
    s: usize,
    #[serde(rename = "M")]
    m: u64,
    p_total_w: u64,
    provenance: &'a str,
}

fn cmd_list(format: Format) -> Result<String> {
    let entries = catalog();
    let rows: Vec<ListRow> = entries
        .iter()
        .map(|e| {
            Ok(ListRow {
                key: e.key,
                devices: e.set.len(),
                s: e.set.power_value_count(),
                m: e.set.state_count()?,
                p_total_w: e.set.total_power(),
                provenance: e.provenance,
            })
        })
        .collect::<Result<_>>()?;
    Ok(match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from("key,devices,S,M,P_total_w,provenance\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},\"{}\"\n",
                    r.key, r.devices, r.s, r.m, r.p_total_w, r.provenance
                ));
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "{:<8} {:>3} {:>3} {:>7} {:>8}  {}\n",
                "key", "N", "S", "M", "P_total", "provenance"
            );
            for r in &rows {
                out.push_str(&format!(
                    "{:<8} {:>3} {:>3} {:>7} {:>8}  {}\n",
                    r.key, r.devices, r.s, r.m, r.p_total_w, r.provenance
                ));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct SetInfo {
    name: String,
    devices: Vec<Vec<u64>>,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "S")]
    s: usize,
    #[serde(rename = "S_with_off")]
    s_with_off: usize,
    #[serde(rename = "M")]
    m: u64,
    p_total_w: u64,
    p_av_w: f64,
    summed_mean_power_w: f64,
}

fn cmd_info(set: &DeviceSet, format: Format) -> Result<String> {
    let info = SetInfo {
        name: set.name().to_owned(),
        devices: set
            .devices()
            .iter()
            .map(|d| d.on_states().to_vec())
            .collect(),
        n: set.len(),
        s: set.power_value_count(),
        s_with_off: set.power_value_count_with_off(),
        m: set.state_count()?,
        p_total_w: set.total_power(),
        p_av_w: set.average_set_power(),
        summed_mean_power_w: set.summed_mean_power(),
    };
    Ok(match format {
        Format::Json => json(&info),
        Format::Csv => format!(
            "name,N,S,S_with_off,M,P_total_w,P_av_w,summed_mean_power_w\n{},{},{},{},{},{},{},{}\n",
            info.name,
            info.n,
            info.s,
            info.s_with_off,
            info.m,
            info.p_total_w,
            real(info.p_av_w),
            real(info.summed_mean_power_w)
        ),
        Format::Text => {
            let devices = info
                .devices
                .iter()
                .map(|d| format!("{d:?}"))
                .collect::<Vec<_>>()
                .join(" ");
            aligned(&[
                ("name", info.name.clone()),
                ("devices", devices),
                ("N", info.n.to_string()),
                ("S", info.s.to_string()),
                ("S_with_off", info.s_with_off.to_string()),
                ("M", info.m.to_string()),
                ("P_total_w", info.p_total_w.to_string()),
                ("P_av_w", real(info.p_av_w)),
                ("summed_mean_power_w", real(info.summed_mean_power_w)),
            ])
        }
    })
}

const C_UNDEFINED: &str = "C undefined at H=0";

#[derive(Serialize)]
struct ReportJson<'a> {
    set: &'a str,
    model: &'a str,
    #[serde(rename = "M")]
    m: u64,
    occupied_values: usize,
    #[serde(rename = "H_bits")]
    h: f64,
    #[serde(rename = "H_max_bits")]
    h_max: f64,
    #[serde(rename = "I_P_bits")]
    ip: f64,
    #[serde(rename = "I_P_max_bits")]
    ip_max: f64,
    #[serde(rename = "C")]
    c: Option<f64>,
    #[serde(rename = "C_status", skip_serializing_if = "Option::is_none")]
    c_status: Option<&'static str>,
    #[serde(rename = "C_max")]
    c_max: f64,
    c_hat: f64,
    #[serde(rename = "bound_C_max")]
    bound_c_max: f64,
}

fn render_report(set: &DeviceSet, model: &str, r: &InfoReport, format: Format) -> String {
    let c_status = r.proficiency.is_none().then_some(C_UNDEFINED);
    match format {
        Format::Json => json(&ReportJson {
            set: set.name(),
            model,
            m: r.state_count,
            occupied_values: r.occupied_values,
            h: r.entropy,
            h_max: r.max_entropy,
            ip: r.mutual_information,
            ip_max: r.max_mutual_information,
            c: r.proficiency,
            c_status,
            c_max: r.max_proficiency,
            c_hat: r.average_occupation,
            bound_c_max: r.max_proficiency_bound,
        }),
        Format::Csv => format!(
            "set,model,M,occupied_values,H_bits,H_max_bits,I_P_bits,I_P_max_bits,C,C_max,c_hat,bound_C_max\n\
             {},{},{},{},{},{},{},{},{},{},{},{}\n",
            set.name(),
            model,
            r.state_count,
            r.occupied_values,
            real(r.entropy),
            real(r.max_entropy),
            real(r.mutual_information),
            real(r.max_mutual_information),
            opt_real(r.proficiency),
            real(r.max_proficiency),
            real(r.average_occupation),
            real(r.max_proficiency_bound)
        ),
        Format::Text => aligned(&[
            ("set", set.name().to_owned()),
            ("model", model.to_owned()),
            ("M", r.state_count.to_string()),
            ("occupied_values", r.occupied_values.to_string()),
            ("H_bits", real(r.entropy)),
            ("H_max_bits", real(r.max_entropy)),
            ("I_P_bits", real(r.mutual_information)),
            ("I_P_max_bits", real(r.max_mutual_information)),
            ("C", r.proficiency.map_or_else(|| C_UNDEFINED.to_owned(), real)),
            ("C_max", real(r.max_proficiency)),
            ("c_hat", real(r.average_occupation)),
            ("bound_C_max", real(r.max_proficiency_bound)),
        ]),
    }
}

fn cmd_analyze(set: &DeviceSet, model: &ModelArgs, format: Format) -> Result<String> {
    let (label, report) = match resolve_model(set, model)? {
        Some((label, m)) => (label, model_report(set, &m)?),
        None => ("max-entropy".to_owned(), max_entropy_report(set)?),
    };
    Ok(render_report(set, &label, &report, format))
}

#[derive(Serialize)]
struct OccupationRow {
    power_w: u64,
    count: u128,
    probability: f64,
}

fn cmd_occupation(set: &DeviceSet, model: &ModelArgs, format: Format) -> Result<String> {
    let hist = occupation_histogram(set)?;
    let model = resolve_model(set, model)?
        .map(|(_, m)| m)
        .unwrap_or_else(|| max_entropy_model(set));
    let dist = power_distribution(set, &model)?;
    let rows: Vec<OccupationRow> = hist
        .counts()
        .iter()
        .map(|&(p, c)| OccupationRow {
            power_w: p,
            count: c,
            probability: dist.mass_at(p),
        })
        .collect();
    Ok(match format {
        Format::Json => json(&rows),
        _ => {
            let mut out = String::from("power_w,count,probability\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    r.power_w,
                    r.count,
                    real(r.probability)
                ));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct SweepJson {
    p_hat: f64,
    #[serde(rename = "H_bits")]
    h: f64,
    #[serde(rename = "IP_bits")]
    ip: f64,
    #[serde(rename = "C")]
    c: Option<f64>,
}

fn cmd_sweep(set: &DeviceSet, grid_spec: &str, format: Format) -> Result<String> {
    let rows = information::sweep(set, &parse_grid(grid_spec)?)?;
    Ok(match format {
        Format::Json => json(
            &rows
                .iter()
                .map(|r| SweepJson {
                    p_hat: r.p_hat,
                    h: r.entropy,
                    ip: r.mutual_information,
                    c: r.proficiency,
                })
                .collect::<Vec<_>>(),
        ),
        _ => {
            let mut out = String::from("p_hat,H_bits,IP_bits,C\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    real(r.p_hat),
                    real(r.entropy),
                    real(r.mutual_information),
                    opt_real(r.proficiency)
                ));
            }
            out
        }
    })
}

fn cmd_synth(set: &DeviceSet, model: &ModelArgs, n: usize, seed: u64) -> Result<String> {
    let model = resolve_model(set, model)?
        .map(|(_, m)| m)
        .unwrap_or_else(|| max_entropy_model(set));
    let profile = synthesize(set, &model, n, seed)?;
    let mut buf = Vec::new();
    write_profile(&profile, &mut buf).expect("writing to memory");
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

#[derive(Serialize)]
struct ProfileStats {
    samples: usize,
    dt_s: f64,
    energy_ws: f64,
    average_power_w: f64,
    zero_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_hat_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_hat_clamped: Option<bool>,
}

fn cmd_profile_stats(path: &PathBuf, set: Option<&str>, format: Format) -> Result<String> {
    let profile = load_profile(path)?;
    let estimate = set
        .map(resolve_set)
        .transpose()?
        .map(|s| estimate_p_hat(&profile, &s));
    let stats = ProfileStats {
        samples: profile.len(),
        dt_s: profile.dt(),
        energy_ws: profile.energy(),
        average_power_w: profile.average_power(),
        zero_fraction: profile.zero_fraction(),
        p_hat_estimate: estimate.map(|e| e.p_hat),
        p_hat_clamped: estimate.map(|e| e.clamped),
    };
    Ok(match format {
        Format::Json => json(&stats),
        Format::Csv => format!(
            "samples,dt_s,energy_ws,average_power_w,zero_fraction,p_hat_estimate,p_hat_clamped\n{},{},{},{},{},{},{}\n",
            stats.samples,
            real(stats.dt_s),
            real(stats.energy_ws),
            real(stats.average_power_w),
            real(stats.zero_fraction),
            stats.p_hat_estimate.map(real).unwrap_or_default(),
            stats.p_hat_clamped.map(|b| b.to_string()).unwrap_or_default()
        ),
        Format::Text => {
            let mut rows = vec![
                ("samples", stats.samples.to_string()),
                ("dt_s", real(stats.dt_s)),
                ("energy_ws", real(stats.energy_ws)),
                ("average_power_w", real(stats.average_power_w)),
                ("zero_fraction", real(stats.zero_fraction)),
            ];
            if let (Some(p), Some(c)) = (stats.p_hat_estimate, stats.p_hat_clamped) {
                rows.push(("p_hat_estimate", real(p)));
                rows.push(("p_hat_clamped", c.to_string()));
            }
            aligned(&rows)
        }
    })
}

fn cmd_tables(table: Option<u8>, format: Format, out: &OutArg) -> Result<Outcome> {
    let checks = match table {
        Some(t) => tables::checks_for(t)?,
        None => tables::all_checks()?,
    };
    let output = match format {
        Format::Csv => tables::render_csv(&checks),
        Format::Json => {
            return Err(Error::Usage(
                "tables supports text and csv output".to_owned(),
            ))
        }
        Format::Text => tables::render_text(&checks),
    };
    let failed = tables::failures(&checks);
    let mut outcome = Outcome::ok(output, out);
    if failed > 0 {
        outcome.error = Some(Error::GoldenMismatch {
            failed,
            total: checks.len(),
        });
    }
    Ok(outcome)
}

/// Executes a parsed command without touching standard streams.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    Ok(match &cli.command {
        Command::List { format, out } => Outcome::ok(cmd_list(*format)?, out),
        Command::Info { set, format, out } => {
            Outcome::ok(cmd_info(&resolve_set(&set.set)?, *format)?, out)
        }
        Command::Analyze {
            set,
            model,
            format,
            out,
        } => Outcome::ok(cmd_analyze(&resolve_set(&set.set)?, model, *format)?, out),
        Command::Occupation {
            set,
            model,
            format,
            out,
        } => Outcome::ok(
            cmd_occupation(&resolve_set(&set.set)?, model, *format)?,
            out,
        ),
        Command::Sweep {
            set,
            grid,
            format,
            out,
        } => Outcome::ok(cmd_sweep(&resolve_set(&set.set)?, grid, *format)?, out),
        Command::Synth {
            set,
            model,
            n,
            seed,
            out,
        } => Outcome::ok(cmd_synth(&resolve_set(&set.set)?, model, *n, *seed)?, out),
        Command::ProfileStats {
            profile,
            set,
            format,
            out,
        } => Outcome::ok(cmd_profile_stats(profile, set.as_deref(), *format)?, out),
        Command::Tables { table, format, out } => cmd_tables(*table, *format, out)?,
    })
}

/// Runs the command, writes its artifact and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &outcome.destination {
        Some(path) => fs::write(path, &outcome.output).map_err(|e| Error::io(path, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(outcome.output.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match outcome.error {
        Some(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}
