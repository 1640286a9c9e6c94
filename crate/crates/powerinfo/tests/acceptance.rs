//! Acceptance criteria. Prints one `criterion N: PASS|FAIL` line each and
//! exits non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::Command;

use powerinfo::core::information::{
    default_grid, entropy_argmax, max_entropy_report, model_report, source_entropy, sweep,
};
use powerinfo::core::probability::{
    enumerate_power_distribution, max_entropy_model, power_distribution, uniform_model,
    zero_power_probability,
};
use powerinfo::core::profile::{synthesize, total_variation};
use powerinfo::core::state_space::{enumerate_occupation, occupation_histogram, state_power_sum};
use powerinfo::core::{catalog, lookup, DeviceSet};
use powerinfo::tables::{checks_for, Status};

fn set(key: &str) -> DeviceSet {
    lookup(key).unwrap().set
}

/// Failure descriptions; entries starting with [`NOTE`] are informational.
type Problems = Vec<String>;

const NOTE: &str = "note: ";

type Criterion = (&'static str, fn() -> Problems);

fn close(problems: &mut Vec<String>, what: String, expected: f64, computed: f64, tol: f64) {
    if !((computed - expected).abs() <= tol + 1e-12) {
        problems.push(format!(
            "{what}: expected {expected} ±{tol}, got {computed}"
        ));
    }
}

fn table_problems(table: u8) -> Problems {
    checks_for(table)
        .unwrap()
        .into_iter()
        .filter_map(|c| match c.status {
            Status::Pass => None,
            Status::Documented(note) => Some(format!(
                "{NOTE}{} {} expected {}, got {} ({note})",
                c.set, c.quantity, c.expected, c.computed
            )),
            Status::Fail => Some(format!(
                "{} {}: expected {} ±{}, got {}",
                c.set, c.quantity, c.expected, c.tolerance, c.computed
            )),
        })
        .collect()
}

fn criterion_01_average_information_table() -> Problems {
    table_problems(2)
}

fn criterion_02_source_entropy_table() -> Problems {
    let mut problems = Vec::new();
    let a = set("a");
    for (p, h) in [
        (0.1, 4.69),
        (0.3, 8.81),
        (0.5, 10.0),
        (0.7, 8.81),
        (0.9, 4.69),
    ] {
        let computed = source_entropy(&a, &uniform_model(&a, p).unwrap()).unwrap();
        close(&mut problems, format!("H(p_hat={p})"), h, computed, 0.01);
        let mirrored = source_entropy(&a, &uniform_model(&a, 1.0 - p).unwrap()).unwrap();
        close(
            &mut problems,
            format!("H symmetry at {p}"),
            computed,
            mirrored,
            1e-9,
        );
    }
    problems
}

fn criterion_03_mutual_information_table() -> Problems {
    table_problems(4)
}

fn criterion_04_artificial_set_table() -> Problems {
    table_problems(5)
}

fn criterion_05_real_set_table() -> Problems {
    table_problems(7)
}

fn criterion_06_sweep_properties() -> Problems {
    let mut problems = Vec::new();
    let grid = default_grid();

    let b2 = sweep(&set("b2"), &grid).unwrap();
    for r in &b2 {
        close(
            &mut problems,
            format!("B2 H-I_P at {}", r.p_hat),
            r.entropy,
            r.mutual_information,
            1e-9,
        );
    }
    let peak = entropy_argmax(&b2).unwrap();
    close(&mut problems, "B2 argmax".into(), 0.5, peak.p_hat, 1e-12);
    close(&mut problems, "B2 peak H".into(), 10.0, peak.entropy, 1e-9);

    let b2plus = set("b2plus");
    let h_max = max_entropy_report(&b2plus).unwrap().max_entropy;
    let top = entropy_argmax(&sweep(&b2plus, &grid).unwrap())
        .unwrap()
        .entropy;
    if !(top < 12.4594 && top < h_max) {
        problems.push(format!("B2+ sweep max {top} not below 12.4594"));
    }

    let arg = entropy_argmax(&sweep(&set("b2x"), &grid).unwrap())
        .unwrap()
        .p_hat;
    if !(0.6..=0.7).contains(&arg) {
        problems.push(format!("B2x argmax {arg} outside [0.6, 0.7]"));
    }

    for (key, c) in [("redd1", 0.993), ("redd2", 0.998), ("redd3", 0.992)] {
        let s = set(key);
        let r = model_report(&s, &uniform_model(&s, 0.1).unwrap()).unwrap();
        close(
            &mut problems,
            format!("{key} C(0.1)"),
            c,
            r.proficiency.unwrap(),
            0.005,
        );
    }
    problems
}

fn criterion_07_oracle_equivalence() -> Problems {
    let mut problems = Vec::new();
    let mut covered = 0;
    for entry in catalog() {
        let s = &entry.set;
        let m = s.state_count().unwrap();
        if m > 100_000 {
            continue;
        }
        covered += 1;
        if occupation_histogram(s).unwrap() != enumerate_occupation(s, m).unwrap() {
            problems.push(format!("{}: occupation histograms differ", entry.key));
        }
        let mut models = vec![max_entropy_model(s)];
        for p in [0.1, 0.5, 0.9] {
            models.push(uniform_model(s, p).unwrap());
        }
        for model in &models {
            let fast = power_distribution(s, model).unwrap();
            let slow = enumerate_power_distribution(s, model, m).unwrap();
            let worst = fast
                .masses()
                .iter()
                .chain(slow.masses())
                .map(|&(p, _)| (fast.mass_at(p) - slow.mass_at(p)).abs())
                .fold(0.0, f64::max);
            if worst > 1e-12 {
                problems.push(format!("{}: distributions differ by {worst}", entry.key));
            }
        }
    }
    if covered != catalog().len() {
        problems.push(format!(
            "{NOTE}{covered} of {} sets within the enumeration limit",
            catalog().len()
        ));
    }
    problems
}

fn criterion_08_analytic_bounds() -> Problems {
    let mut problems = Vec::new();
    for entry in catalog() {
        let s = &entry.set;
        let key = entry.key;
        let me = max_entropy_report(s).unwrap();
        if me.max_mutual_information > me.max_entropy - me.average_occupation.log2() + 1e-9 {
            problems.push(format!("{key}: I_P_max above H_max - ld(c_hat)"));
        }
        let injective = occupation_histogram(s).unwrap().is_injective();
        if (me.max_proficiency >= 1.0 - 1e-12) != injective {
            problems.push(format!("{key}: C_max = 1 does not match injectivity"));
        }
        if s.is_on_off() {
            let m = s.state_count().unwrap() as u128;
            let sum = state_power_sum(s, u64::MAX).unwrap();
            if sum * 2 != m * s.total_power() as u128 {
                problems.push(format!("{key}: mean state power is not P_total/2"));
            }
        }
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let model = uniform_model(s, p).unwrap();
            let r = model_report(s, &model).unwrap();
            if r.mutual_information > r.entropy + 1e-9 {
                problems.push(format!("{key} p_hat={p}: I_P > H"));
            }
            match r.proficiency {
                Some(c) if (0.0..=1.0).contains(&c) => {}
                c => problems.push(format!("{key} p_hat={p}: C = {c:?}")),
            }
            let dist = power_distribution(s, &model).unwrap();
            let p0 = zero_power_probability(&model);
            if (dist.mass_at(0) - p0).abs() > 1e-12 {
                problems.push(format!(
                    "{key} p_hat={p}: p(0) != product of off probabilities"
                ));
            }
        }
    }
    problems
}

fn criterion_09_monte_carlo() -> Problems {
    let mut problems = Vec::new();
    let a = set("a");
    let model = uniform_model(&a, 0.1).unwrap();
    let profile = synthesize(&a, &model, 1_000_000, 1).unwrap();
    close(
        &mut problems,
        "zero fraction".into(),
        0.3487,
        profile.zero_fraction(),
        0.002,
    );
    close(
        &mut problems,
        "mean power".into(),
        27.5,
        profile.average_power(),
        0.5,
    );
    let tv = total_variation(
        &power_distribution(&a, &model).unwrap(),
        &profile.empirical_distribution(),
    );
    if !(tv < 0.01) {
        problems.push(format!("total variation {tv} not below 0.01"));
    }
    problems
}

fn cli(args: &[&str]) -> Vec<u8> {
    Command::new(env!("CARGO_BIN_EXE_powerinfo"))
        .args(args)
        .output()
        .expect("run powerinfo")
        .stdout
}

fn criterion_10_determinism() -> Problems {
    let mut problems = Vec::new();
    let runs: [&[&str]; 3] = [
        &["tables"],
        &["tables", "--format", "csv"],
        &["sweep", "--set", "b2x"],
    ];
    for args in runs {
        let first = cli(args);
        if first.is_empty() {
            problems.push(format!("{args:?}: no output"));
        }
        if cli(args) != first {
            problems.push(format!("{args:?}: output differs between runs"));
        }
    }
    problems
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "average-information table of sets A and B",
            criterion_01_average_information_table,
        ),
        (
            "source entropy of ten on-off devices",
            criterion_02_source_entropy_table,
        ),
        (
            "I_P and C of sets A and B",
            criterion_03_mutual_information_table,
        ),
        (
            "parameters of sets B, B2, B2+, B2x",
            criterion_04_artificial_set_table,
        ),
        (
            "parameters of the nine measured sets",
            criterion_05_real_set_table,
        ),
        ("sweep-curve properties", criterion_06_sweep_properties),
        (
            "enumeration and convolution agree",
            criterion_07_oracle_equivalence,
        ),
        (
            "analytic bounds on every catalog set",
            criterion_08_analytic_bounds,
        ),
        (
            "seeded synthesis matches the analytic distribution",
            criterion_09_monte_carlo,
        ),
        ("byte-identical repeated output", criterion_10_determinism),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let problems = run();
        let failing = problems.iter().any(|p| !p.starts_with(NOTE));
        let status = if failing { "FAIL" } else { "PASS" };
        println!("criterion {}: {status}  {title}", i + 1);
        for p in &problems {
            println!("    {p}");
        }
        failed += usize::from(failing);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
