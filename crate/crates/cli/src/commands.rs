use std::fs;

use ergopress::io::{parse_measure, tower_to_json};
use ergopress::pressure::{
    fekete_bracket, orbit_average_weighted, pressure_finite, sup_weighted_sequence,
};
use ergopress::variational::{optimize, vp_check};
use rayon::prelude::*;

use crate::args::{Command, GenArgs, Mode, RunArgs, SuiteArgs};
use crate::error::{CliError, CliResult};
use crate::generate::generate;
use crate::report::{
    render, second_differences, PressureRow, ReportRow, SweepRow, WeightedRow, PRESSURE_HEADER,
    REPORT_HEADER, SUITE_HEADER, SWEEP_HEADER, WEIGHTED_HEADER,
};
use crate::scenario::{read, Scenario};
use crate::suite::run_suite;

/// Rendered output and whether every checked property held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub all_pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            all_pass: true,
        }
    }
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Pressure(a) => pressure(a),
        Command::Weighted(a) => weighted(a),
        Command::VpCheck(a) => vp(a),
        Command::PropertySuite(a) => suite(a),
        Command::SweepOmega(a) => sweep(a),
        Command::GenRandom(a) => gen_random(a),
    }
}

/// Writes to `--out` when given; returns what should go to stdout.
pub fn emit(outcome: &Outcome, out: Option<&std::path::Path>) -> CliResult<Option<String>> {
    match out {
        Some(p) => {
            fs::write(p, &outcome.text)
                .map_err(|e| CliError::validation(format!("cannot write {}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(outcome.text.clone())),
    }
}

pub fn out_path(command: &Command) -> Option<&std::path::Path> {
    match command {
        Command::Pressure(a) | Command::Weighted(a) | Command::VpCheck(a) | Command::SweepOmega(a) => {
            a.out.as_deref()
        }
        Command::PropertySuite(a) => a.out.as_deref(),
        Command::GenRandom(a) => a.out.as_deref(),
    }
}

fn pressure(args: &RunArgs) -> CliResult<Outcome> {
    let s = Scenario::load(args)?;
    let values: Vec<f64> = (1..=s.n_max)
        .into_par_iter()
        .map(|n| pressure_finite(s.tower.x(), &s.potential, n))
        .collect::<Result<_, _>>()?;
    let rows: Vec<PressureRow> = (s.n_min..=s.n_max)
        .map(|n| {
            let fk = fekete_bracket(&values[..n]);
            PressureRow {
                scenario: s.id.clone(),
                n,
                value: values[n - 1],
                per_n: values[n - 1] / n as f64,
                fekete_upper: fk.upper,
                fekete_extrapolated: fk.extrapolated,
            }
        })
        .collect();
    Ok(Outcome::ok(render(&rows, args.format, PRESSURE_HEADER)?))
}

fn weighted(args: &RunArgs) -> CliResult<Outcome> {
    let s = Scenario::load(args)?;
    let t = &s.tower;
    let base = match (args.mode, &args.base) {
        (Mode::Orbit, Some(b)) => Some(t.z().parse_word(b)?),
        (Mode::Orbit, None) => return Err(CliError::validation("orbit mode needs --base")),
        (Mode::Sup, _) => None,
    };
    let mut rows = Vec::new();
    for &w in &s.omegas {
        let seq: Vec<(f64, String)> = match &base {
            None => sup_weighted_sequence(t, &s.potential, w, s.n_max)?
                .into_iter()
                .map(|(v, z)| (v, t.z().format_word(&z)))
                .collect(),
            Some(b) => {
                let label = t.z().format_word(b);
                (1..=s.n_max)
                    .into_par_iter()
                    .map(|n| orbit_average_weighted(t, &s.potential, w, b, n))
                    .collect::<Result<Vec<f64>, _>>()?
                    .into_iter()
                    .map(|v| (v, label.clone()))
                    .collect()
            }
        };
        let values: Vec<f64> = seq.iter().map(|(v, _)| *v).collect();
        for n in s.n_min..=s.n_max {
            let fk = fekete_bracket(&values[..n]);
            rows.push(WeightedRow {
                scenario: s.id.clone(),
                omega: w,
                n,
                mode: match args.mode {
                    Mode::Sup => "sup".into(),
                    Mode::Orbit => "orbit".into(),
                },
                value: values[n - 1],
                per_n: values[n - 1] / n as f64,
                argmax: seq[n - 1].1.clone(),
                fekete_upper: fk.upper,
                fekete_extrapolated: fk.extrapolated,
            });
        }
    }
    Ok(Outcome::ok(render(&rows, args.format, WEIGHTED_HEADER)?))
}

fn vp(args: &RunArgs) -> CliResult<Outcome> {
    let s = Scenario::load(args)?;
    let t = &s.tower;
    let extra = match &args.measure {
        Some(p) => {
            let mu = parse_measure(&read(p)?, t.x()).map_err(|e| match e {
                ergopress::Error::Reducible { .. } => CliError::validation(e.to_string()),
                e => e.into(),
            })?;
            vec![mu]
        }
        None => vec![],
    };
    let mut rows = Vec::new();
    for &w in &s.omegas {
        let report = vp_check(t, &s.potential, w, s.n_min, s.n_max, &s.config, &extra)?;
        for r in report.rows {
            rows.push(ReportRow {
                scenario: s.id.clone(),
                omega: r.omega,
                n: r.n,
                sup_weighted: r.sup_weighted,
                argmax: t.z().format_word(&r.argmax),
                fekete_upper: r.fekete_upper,
                fekete_extrapolated: r.fekete_extrapolated,
                measure_lower: r.measure_lower,
                measure_upper: r.measure_upper,
                gap: r.gap,
                slack: r.slack,
                pass: r.pass,
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(Outcome {
        text: render(&rows, args.format, REPORT_HEADER)?,
        all_pass,
    })
}

fn sweep(args: &RunArgs) -> CliResult<Outcome> {
    let s = Scenario::load(args)?;
    if s.omegas.len() < 3 {
        return Err(CliError::validation("an omega sweep needs at least 3 grid points"));
    }
    if s.omegas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::validation("omega grid must be strictly increasing"));
    }
    let t = &s.tower;
    let mut tops = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for &w in &s.omegas {
        let seq = sup_weighted_sequence(t, &s.potential, w, s.n_max)?;
        let values: Vec<f64> = seq.iter().map(|(v, _)| *v).collect();
        tops.push(fekete_bracket(&values).upper);
        let best = optimize(t, &s.potential, w, &s.config)?;
        lower.push(best.best_value.lower);
        upper.push(best.best_value.upper);
    }
    let d_top = second_differences(&s.omegas, &tops);
    let d_measure = second_differences(&s.omegas, &lower);
    let rows: Vec<SweepRow> = (0..s.omegas.len())
        .map(|i| SweepRow {
            scenario: s.id.clone(),
            omega: s.omegas[i],
            topological_upper: tops[i],
            measure_lower: lower[i],
            measure_upper: upper[i],
            topological_second_difference: d_top[i],
            measure_second_difference: d_measure[i],
        })
        .collect();
    Ok(Outcome::ok(render(&rows, args.format, SWEEP_HEADER)?))
}

fn suite(args: &SuiteArgs) -> CliResult<Outcome> {
    let rows = run_suite(args.generator, args.seed, args.count)?;
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(Outcome {
        text: render(&rows, args.format, SUITE_HEADER)?,
        all_pass,
    })
}

fn gen_random(args: &GenArgs) -> CliResult<Outcome> {
    let towers: Vec<String> = (0..args.count)
        .map(|i| generate(args.generator, args.seed, i).map(|(t, f)| tower_to_json(&t, &f)))
        .collect::<CliResult<_>>()?;
    let mut text = if args.count == 1 {
        towers[0].clone()
    } else {
        format!("[\n{}\n]", towers.join(",\n"))
    };
    text.push('\n');
    Ok(Outcome::ok(text))
}
