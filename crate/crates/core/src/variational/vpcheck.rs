use super::objective::{weighted_objective, ObjectiveValue};
use super::optimize::{optimize, OptimizerConfig, VariationalResult};
use crate::measures::MarkovMeasure;
use crate::pressure::{fekete_bracket, sup_weighted_sequence};
use crate::symbolic::{Potential, Tower, Word};
use crate::{Error, Result};

/// One level of a variational check.
#[derive(Debug, Clone, PartialEq)]
pub struct VpRow {
    pub omega: f64,
    pub n: usize,
    /// `max_ζ log W_n(ζ)`.
    pub sup_weighted: f64,
    pub argmax: Word,
    pub fekete_upper: f64,
    pub fekete_extrapolated: f64,
    pub measure_lower: f64,
    pub measure_upper: f64,
    /// `fekete_upper - measure_lower`.
    pub gap: f64,
    /// Bracket width of the measure side plus `1e-9`.
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct VpReport {
    pub rows: Vec<VpRow>,
    pub best: VariationalResult,
    /// Best measure-side value over the optimizer and the extra measures.
    pub measure: ObjectiveValue,
}

impl VpReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Compares the topological side at every `n` in `n_min..=n_max` with the
/// best measure-side lower bound from [`optimize`] and `extra` measures.
pub fn vp_check(
    t: &Tower,
    f: &Potential,
    omega: f64,
    n_min: usize,
    n_max: usize,
    config: &OptimizerConfig,
    extra: &[MarkovMeasure],
) -> Result<VpReport> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::Invalid(format!("bad level range {n_min}..={n_max}")));
    }
    let seq = sup_weighted_sequence(t, f, omega, n_max)?;
    let best = optimize(t, f, omega, config)?;
    let mut measure = best.best_value;
    for mu in extra {
        let v = weighted_objective(t, mu, f, omega, config.n_entropy)?;
        if v.lower > measure.lower {
            measure = v;
        }
    }
    let values: Vec<f64> = seq.iter().map(|(v, _)| *v).collect();
    let slack = measure.width() + 1e-9;
    let rows = (n_min..=n_max)
        .map(|n| {
            let fk = fekete_bracket(&values[..n]);
            let (sup, argmax) = seq[n - 1].clone();
            VpRow {
                omega,
                n,
                sup_weighted: sup,
                argmax,
                fekete_upper: fk.upper,
                fekete_extrapolated: fk.extrapolated,
                measure_lower: measure.lower,
                measure_upper: measure.upper,
                gap: fk.upper - measure.lower,
                slack,
                pass: measure.lower <= fk.upper + slack,
            }
        })
        .collect();
    Ok(VpReport {
        rows,
        best,
        measure,
    })
}
