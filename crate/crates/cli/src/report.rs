//! Report rows and their CSV / JSON rendering.

use serde::Serialize;

use crate::args::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureRow {
    pub scenario: String,
    pub n: usize,
    pub value: f64,
    pub per_n: f64,
    pub fekete_upper: f64,
    pub fekete_extrapolated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedRow {
    pub scenario: String,
    pub omega: f64,
    pub n: usize,
    pub mode: String,
    /// `log W_n`, maximized or orbit-averaged.
    pub value: f64,
    pub per_n: f64,
    pub argmax: String,
    pub fekete_upper: f64,
    pub fekete_extrapolated: f64,
}

/// One `(ω, n)` line of a variational check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub scenario: String,
    pub omega: f64,
    pub n: usize,
    pub sup_weighted: f64,
    pub argmax: String,
    pub fekete_upper: f64,
    pub fekete_extrapolated: f64,
    pub measure_lower: f64,
    pub measure_upper: f64,
    pub gap: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scenario: String,
    pub omega: f64,
    pub topological_upper: f64,
    pub measure_lower: f64,
    pub measure_upper: f64,
    pub topological_second_difference: Option<f64>,
    pub measure_second_difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub tower: usize,
    /// Alphabet sizes of X, Y and Z.
    pub shape: String,
    pub property: String,
    pub checks: usize,
    pub failures: usize,
    /// Smallest slack against the tested bound; negative means failure.
    pub worst_margin: f64,
    pub pass: bool,
}

pub fn render<R: Serialize>(rows: &[R], format: Format, header: &[&str]) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows)
                .map_err(|e| CliError::validation(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            let fail = |e: csv::Error| CliError::validation(e.to_string());
            w.write_record(header).map_err(fail)?;
            for r in rows {
                w.serialize(r).map_err(fail)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::validation(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::validation(e.to_string()))
        }
    }
}

pub const PRESSURE_HEADER: &[&str] =
    &["scenario", "n", "value", "per_n", "fekete_upper", "fekete_extrapolated"];
pub const WEIGHTED_HEADER: &[&str] = &[
    "scenario",
    "omega",
    "n",
    "mode",
    "value",
    "per_n",
    "argmax",
    "fekete_upper",
    "fekete_extrapolated",
];
pub const REPORT_HEADER: &[&str] = &[
    "scenario",
    "omega",
    "n",
    "sup_weighted",
    "argmax",
    "fekete_upper",
    "fekete_extrapolated",
    "measure_lower",
    "measure_upper",
    "gap",
    "slack",
    "pass",
];
pub const SWEEP_HEADER: &[&str] = &[
    "scenario",
    "omega",
    "topological_upper",
    "measure_lower",
    "measure_upper",
    "topological_second_difference",
    "measure_second_difference",
];
pub const SUITE_HEADER: &[&str] =
    &["tower", "shape", "property", "checks", "failures", "worst_margin", "pass"];

/// `2 [ (h₋ y₊ + h₊ y₋) / (h₋ + h₊) - y ]` at every interior grid point:
/// chord minus value, nonnegative for convex data.
pub fn second_differences(x: &[f64], y: &[f64]) -> Vec<Option<f64>> {
    (0..x.len())
        .map(|i| {
            if i == 0 || i + 1 >= x.len() {
                return None;
            }
            let hm = x[i] - x[i - 1];
            let hp = x[i + 1] - x[i];
            Some(2.0 * ((hm * y[i + 1] + hp * y[i - 1]) / (hm + hp) - y[i]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_fixed_header() {
        let rows = vec![PressureRow {
            scenario: "s".into(),
            n: 2,
            value: 1.5,
            per_n: 0.75,
            fekete_upper: 0.75,
            fekete_extrapolated: 0.5,
        }];
        let s = render(&rows, Format::Csv, PRESSURE_HEADER).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), PRESSURE_HEADER.join(","));
        assert_eq!(lines.next().unwrap(), "s,2,1.5,0.75,0.75,0.5");
        let empty: Vec<PressureRow> = vec![];
        assert_eq!(render(&empty, Format::Csv, PRESSURE_HEADER).unwrap().lines().count(), 1);
    }

    #[test]
    fn second_differences_of_parabola() {
        let x = [0.0, 0.25, 0.5, 1.0];
        let y: Vec<f64> = x.iter().map(|t| t * t).collect();
        let d = second_differences(&x, &y);
        assert_eq!(d[0], None);
        assert_eq!(d[3], None);
        assert!((d[1].unwrap() - 2.0 * 0.25 * 0.25).abs() < 1e-15);
        assert!((d[2].unwrap() - 2.0 * 0.25 * 0.5).abs() < 1e-12);
    }
}
