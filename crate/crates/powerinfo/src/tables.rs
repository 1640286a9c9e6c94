//! Published reference values and their recomputation.
//!
//! Every check compares a recomputed quantity with its published value at
//! a fixed absolute tolerance (0 for exact integers). One check is marked
//! as a documented discrepancy instead of a failure: GreenD1's `S + N`,
//! where the published 26 disagrees with the published power states (25).

use powerinfo_core::information::{max_entropy_report, model_report, source_entropy};
use powerinfo_core::probability::uniform_model;
use powerinfo_core::{lookup, DeviceSet};

use crate::error::Result;
use crate::fmt::real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Known disagreement inside the published data; reported, not counted.
    Documented(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub table: u8,
    pub set: &'static str,
    pub quantity: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    fn new(
        table: u8,
        set: &'static str,
        quantity: impl Into<String>,
        expected: f64,
        computed: f64,
        tolerance: f64,
    ) -> Self {
        let status = if (computed - expected).abs() <= tolerance + 1e-12 {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            table,
            set,
            quantity: quantity.into(),
            expected,
            computed,
            tolerance,
            status,
        }
    }

    fn documented(mut self, note: &'static str) -> Self {
        if self.status == Status::Fail {
            self.status = Status::Documented(note);
        }
        self
    }
}

pub const TABLES: [u8; 5] = [2, 3, 4, 5, 7];

const TOL_BITS: f64 = 0.01;
const TOL_IP_MAX: f64 = 0.05;
const TOL_C: f64 = 0.01;

fn set(key: &str) -> DeviceSet {
    lookup(key).expect("catalog key").set
}

fn table2() -> Result<Vec<Check>> {
    // set, I_P_max, C_max, c_hat
    const ROWS: [(&str, f64, f64, f64); 2] = [("a", 5.33, 0.53, 18.3), ("b", 8.04, 0.80, 3.6)];
    let mut out = Vec::new();
    for (key, ip, c, c_hat) in ROWS {
        let r = max_entropy_report(&set(key))?;
        out.push(Check::new(
            2,
            key,
            "I_P_max",
            ip,
            r.max_mutual_information,
            TOL_BITS,
        ));
        out.push(Check::new(2, key, "C_max", c, r.max_proficiency, TOL_C));
        out.push(Check::new(
            2,
            key,
            "c_hat",
            c_hat,
            r.average_occupation,
            0.05,
        ));
    }
    Ok(out)
}

fn table3() -> Result<Vec<Check>> {
    const ROWS: [(f64, f64); 5] = [
        (0.1, 4.69),
        (0.3, 8.81),
        (0.5, 10.0),
        (0.7, 8.81),
        (0.9, 4.69),
    ];
    // any ten on-off devices; the source entropy does not depend on power values
    let s = set("a");
    ROWS.iter()
        .map(|&(p, h)| {
            let computed = source_entropy(&s, &uniform_model(&s, p)?)?;
            Ok(Check::new(
                3,
                "a",
                format!("H(p_hat={p})"),
                h,
                computed,
                TOL_BITS,
            ))
        })
        .collect()
}

/// `(p_hat, I_P, C)`
type ModelPoint = (f64, f64, f64);

fn table4() -> Result<Vec<Check>> {
    const ROWS: [(&str, [ModelPoint; 3]); 2] = [
        (
            "a",
            [(0.1, 3.70, 0.79), (0.3, 5.14, 0.58), (0.5, 5.33, 0.53)],
        ),
        (
            "b",
            [(0.1, 4.50, 0.96), (0.3, 7.51, 0.85), (0.5, 8.04, 0.80)],
        ),
    ];
    let mut out = Vec::new();
    for (key, points) in ROWS {
        let s = set(key);
        for (p, ip, c) in points {
            let r = model_report(&s, &uniform_model(&s, p)?)?;
            out.push(Check::new(
                4,
                key,
                format!("I_P(p_hat={p})"),
                ip,
                r.mutual_information,
                TOL_BITS,
            ));
            let computed = r.proficiency.unwrap_or(f64::NAN);
            out.push(Check::new(
                4,
                key,
                format!("C(p_hat={p})"),
                c,
                computed,
                TOL_C,
            ));
        }
    }
    Ok(out)
}

struct SetRow {
    key: &'static str,
    s: f64,
    m: f64,
    h_max: f64,
    ip_max: f64,
    c_max: f64,
    c_hat: f64,
}

const fn row(
    key: &'static str,
    s: f64,
    m: f64,
    h_max: f64,
    ip_max: f64,
    c_max: f64,
    c_hat: f64,
) -> SetRow {
    SetRow {
        key,
        s,
        m,
        h_max,
        ip_max,
        c_max,
        c_hat,
    }
}

const TABLE5: [SetRow; 4] = [
    row("b", 10.0, 1024.0, 10.0, 8.04, 0.80, 3.6),
    row("b2", 10.0, 1024.0, 10.0, 10.0, 1.0, 1.0),
    row("b2plus", 19.0, 5632.0, 12.46, 9.6, 0.77, 5.5),
    row("b2x", 19.0, 39366.0, 15.26, 9.8, 0.64, 38.5),
];

/// `S` in this table counts each device's off state as well.
const TABLE7: [SetRow; 9] = [
    row("greend1", 26.0, 2352.0, 11.2, 10.21, 0.91, 1.23),
    row("greend2", 15.0, 192.0, 7.59, 7.20, 0.95, 1.10),
    row("greend3", 30.0, 10800.0, 13.4, 11.69, 0.87, 1.76),
    row("redd1", 26.0, 3456.0, 11.75, 10.72, 0.91, 1.18),
    row("redd2", 17.0, 384.0, 8.59, 8.4, 0.98, 1.94),
    row("redd3", 24.0, 2880.0, 11.49, 10.04, 0.87, 1.67),
    row("eco1", 19.0, 576.0, 9.17, 8.84, 0.96, 2.24),
    row("eco2", 17.0, 486.0, 8.92, 7.86, 0.88, 1.79),
    row("eco3", 23.0, 1152.0, 10.17, 8.97, 0.88, 2.57),
];

fn set_table(table: u8, rows: &[SetRow], c_hat_tol: f64, s_with_off: bool) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for r in rows {
        let s = set(r.key);
        let rep = max_entropy_report(&s)?;
        let (s_label, s_value) = if s_with_off {
            ("S+N", s.power_value_count_with_off())
        } else {
            ("S", s.power_value_count())
        };
        let mut s_check = Check::new(table, r.key, s_label, r.s, s_value as f64, 0.0);
        if table == 7 && r.key == "greend1" {
            s_check = s_check.documented("published S disagrees with the published power states");
        }
        out.push(s_check);
        out.push(Check::new(
            table,
            r.key,
            "M",
            r.m,
            rep.state_count as f64,
            0.0,
        ));
        out.push(Check::new(
            table,
            r.key,
            "H_max",
            r.h_max,
            rep.max_entropy,
            TOL_BITS,
        ));
        out.push(Check::new(
            table,
            r.key,
            "I_P_max",
            r.ip_max,
            rep.max_mutual_information,
            TOL_IP_MAX,
        ));
        out.push(Check::new(
            table,
            r.key,
            "C_max",
            r.c_max,
            rep.max_proficiency,
            TOL_C,
        ));
        out.push(Check::new(
            table,
            r.key,
            "c_hat",
            r.c_hat,
            rep.average_occupation,
            c_hat_tol,
        ));
    }
    Ok(out)
}

/// Recomputes one published table.
pub fn checks_for(table: u8) -> Result<Vec<Check>> {
    match table {
        2 => table2(),
        3 => table3(),
        4 => table4(),
        5 => set_table(5, &TABLE5, 0.05, false),
        7 => set_table(7, &TABLE7, 0.01, true),
        _ => Err(crate::error::Error::Usage(format!(
            "unknown table {table}; expected one of 2, 3, 4, 5, 7"
        ))),
    }
}

pub fn all_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for t in TABLES {
        out.extend(checks_for(t)?);
    }
    Ok(out)
}

pub fn failures(checks: &[Check]) -> usize {
    checks.iter().filter(|c| c.status == Status::Fail).count()
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Documented(_) => "documented",
    }
}

pub fn render_csv(checks: &[Check]) -> String {
    let mut out = String::from("table,set,quantity,expected,computed,tolerance,status\n");
    for c in checks {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.table,
            c.set,
            c.quantity,
            real(c.expected),
            real(c.computed),
            real(c.tolerance),
            status_label(c.status)
        ));
    }
    out
}

pub fn render_text(checks: &[Check]) -> String {
    let mut out = format!(
        "{:<6} {:<8} {:<14} {:>10} {:>10} {:>6}  {}\n",
        "table", "set", "quantity", "expected", "computed", "tol", "status"
    );
    for c in checks {
        let status = match c.status {
            Status::Documented(note) => format!("documented ({note})"),
            s => status_label(s).to_owned(),
        };
        out.push_str(&format!(
            "{:<6} {:<8} {:<14} {:>10} {:>10} {:>6}  {}\n",
            c.table,
            c.set,
            c.quantity,
            real(c.expected),
            real(c.computed),
            real(c.tolerance),
            status
        ));
    }
    let documented = checks
        .iter()
        .filter(|c| matches!(c.status, Status::Documented(_)))
        .count();
    let failed = failures(checks);
    out.push_str(&format!(
        "{} checks: {} passed, {} failed, {} documented discrepancies\n",
        checks.len(),
        checks.len() - failed - documented,
        failed,
        documented
    ));
    out
}
