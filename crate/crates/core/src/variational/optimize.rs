//! Projected finite-difference ascent over Markov kernels.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::extremal::extremal_measure;
use super::objective::{weighted_objective, ObjectiveValue};
use crate::measures::MarkovMeasure;
use crate::pressure::{check_omega, sup_weighted};
use crate::symbolic::{Potential, Sft, Tower};
use crate::{Error, Result};

/// Final measure, its value and the ascent trace of one start.
type Run = (MarkovMeasure, ObjectiveValue, Vec<(usize, f64)>);

/// Finite-difference step for kernel rows.
pub const FD_STEP: f64 = 1e-4;
const MIN_STEP: f64 = 1e-10;
const MAX_STEP: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Markov order of the searched measures.
    pub order: usize,
    /// Number of random starting kernels.
    pub restarts: usize,
    pub seed: u64,
    /// Level of the entropy brackets.
    pub n_entropy: usize,
    pub max_iters: usize,
    /// Stop once one accepted step improves the lower bound by less.
    pub tol: f64,
    /// Levels at which extremal starting measures are built.
    pub seed_levels: Vec<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            order: 1,
            restarts: 8,
            seed: 42,
            n_entropy: 10,
            max_iters: 500,
            tol: 1e-9,
            seed_levels: vec![4, 8, 12],
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Invalid("order must be at least 1".into()));
        }
        if self.n_entropy < 2 {
            return Err(Error::InsufficientN {
                n: self.n_entropy,
                min: 2,
            });
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if self.seed_levels.contains(&0) {
            return Err(Error::ZeroLevel);
        }
        Ok(())
    }
}

/// Best measure found by [`optimize`].
#[derive(Debug, Clone)]
pub struct VariationalResult {
    pub best_measure: MarkovMeasure,
    pub best_value: ObjectiveValue,
    /// `(iteration, lower bound)` of the winning start.
    pub trace: Vec<(usize, f64)>,
    /// Number of starts that produced a feasible measure.
    pub restarts: usize,
    pub seed: u64,
    /// Which start won, e.g. `parry` or `random 3`.
    pub start: String,
}

struct Problem<'a> {
    t: &'a Tower,
    f: &'a Potential,
    omega: f64,
    n: usize,
    order: usize,
    blocks: Sft,
}

impl Problem<'_> {
    fn eval(&self, kernel: Vec<Vec<f64>>) -> Option<(MarkovMeasure, ObjectiveValue)> {
        let mu = MarkovMeasure::new(self.t.x(), self.order, kernel).ok()?;
        let v = weighted_objective(self.t, &mu, self.f, self.omega, self.n).ok()?;
        Some((mu, v))
    }

    fn lower(&self, kernel: Vec<Vec<f64>>) -> f64 {
        self.eval(kernel).map_or(f64::NEG_INFINITY, |(_, v)| v.lower)
    }

    /// Directional differences along `(K_r + h e_j) / (1 + h)`.
    fn gradient(&self, kernel: &[Vec<f64>], base: f64) -> Vec<Vec<f64>> {
        let params: Vec<(usize, usize)> = (0..kernel.len())
            .filter(|&r| self.blocks.successors(r).len() > 1)
            .flat_map(|r| self.blocks.successors(r).iter().map(move |&j| (r, j)))
            .collect();
        let diffs: Vec<f64> = params
            .par_iter()
            .map(|&(r, j)| {
                let mut k = kernel.to_vec();
                let row = &mut k[r];
                row[j] += FD_STEP;
                row.iter_mut().for_each(|x| *x /= 1.0 + FD_STEP);
                let v = self.lower(k);
                if v.is_finite() {
                    (v - base) / FD_STEP
                } else {
                    0.0
                }
            })
            .collect();
        let mut g = vec![vec![0.0; kernel.len()]; kernel.len()];
        for (&(r, j), d) in params.iter().zip(diffs) {
            g[r][j] = d;
        }
        g
    }

    fn ascend(
        &self,
        start: MarkovMeasure,
        max_iters: usize,
        tol: f64,
    ) -> Option<Run> {
        let (mut mu, mut val) = self.eval(start.kernel().to_vec())?;
        let mut trace = vec![(0, val.lower)];
        let mut step = 0.5;
        for iter in 1..=max_iters {
            let g = self.gradient(mu.kernel(), val.lower);
            if g.iter().flatten().all(|&x| x == 0.0) {
                break;
            }
            let mut accepted = None;
            while step >= MIN_STEP {
                let cand: Vec<Vec<f64>> = mu
                    .kernel()
                    .iter()
                    .zip(&g)
                    .enumerate()
                    .map(|(r, (row, gr))| {
                        project_row(row, gr, step, self.blocks.successors(r))
                    })
                    .collect();
                match self.eval(cand) {
                    Some((m, v)) if v.lower > val.lower => {
                        accepted = Some((m, v));
                        break;
                    }
                    _ => step *= 0.5,
                }
            }
            let Some((m, v)) = accepted else { break };
            let gain = v.lower - val.lower;
            mu = m;
            val = v;
            trace.push((iter, val.lower));
            step = (step * 2.0).min(MAX_STEP);
            if gain < tol {
                break;
            }
        }
        Some((mu, val, trace))
    }
}

/// Euclidean projection of `row + step * g` onto the simplex supported on
/// `support`.
fn project_row(row: &[f64], g: &[f64], step: f64, support: &[usize]) -> Vec<f64> {
    let y: Vec<f64> = support.iter().map(|&j| row[j] + step * g[j]).collect();
    let mut sorted = y.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cum += u;
        let t = (cum - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    let mut out = vec![0.0; row.len()];
    for (&j, &v) in support.iter().zip(&y) {
        out[j] = (v - theta).max(0.0);
    }
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= s);
    out
}

/// Searches order-`m` Markov measures on `t.x()` for the largest lower bound
/// of the weighted objective.
///
/// Starts are extremal measures at `config.seed_levels`, the Parry measure
/// and `config.restarts` random kernels; they run concurrently and the
/// winner is the largest lower bound, ties going to the earlier start.
pub fn optimize(
    t: &Tower,
    f: &Potential,
    omega: f64,
    config: &OptimizerConfig,
) -> Result<VariationalResult> {
    check_omega(omega)?;
    config.validate()?;
    if f.len() != t.x().len() {
        return Err(Error::DimensionMismatch(
            "potential does not live on the top shift".into(),
        ));
    }
    let (blocks, _) = t.x().higher_block(config.order)?;
    let problem = Problem {
        t,
        f,
        omega,
        n: config.n_entropy,
        order: config.order,
        blocks,
    };

    let mut labels: Vec<String> = config
        .seed_levels
        .iter()
        .filter(|&&n| n > config.order)
        .map(|n| format!("extremal n={n}"))
        .collect();
    let extremal_levels: Vec<usize> = config
        .seed_levels
        .iter()
        .copied()
        .filter(|&n| n > config.order)
        .collect();
    labels.push("parry".into());
    labels.extend((0..config.restarts).map(|i| format!("random {i}")));

    let build = |i: usize| -> Option<MarkovMeasure> {
        let ne = extremal_levels.len();
        if i < ne {
            let n = extremal_levels[i];
            let (_, zeta) = sup_weighted(t, f, omega, n).ok()?;
            extremal_measure(t, f, omega, &zeta, n, config.order).ok()
        } else if i == ne {
            MarkovMeasure::parry(t.x(), config.order).ok()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream((i - ne - 1) as u64);
            MarkovMeasure::random(t.x(), config.order, &mut rng).ok()
        }
    };

    let runs: Vec<Option<Run>> = (0..labels.len())
        .into_par_iter()
        .map(|i| build(i).and_then(|mu| problem.ascend(mu, config.max_iters, config.tol)))
        .collect();

    let feasible = runs.iter().filter(|r| r.is_some()).count();
    let mut best: Option<(usize, Run)> = None;
    for (i, run) in runs.into_iter().enumerate() {
        let Some(run) = run else { continue };
        if best.as_ref().is_none_or(|(_, b)| run.1.lower > b.1.lower) {
            best = Some((i, run));
        }
    }
    let (i, (best_measure, best_value, trace)) = best.ok_or_else(|| {
        Error::Invalid("no starting measure is feasible on this shift".into())
    })?;
    Ok(VariationalResult {
        best_measure,
        best_value,
        trace,
        restarts: feasible,
        seed: config.seed,
        start: labels[i].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::oracle::{closed_form_product_tower, product_potential};

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 2,
            n_entropy: 6,
            max_iters: 200,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn projection_stays_on_support() {
        let row = [0.5, 0.5, 0.0];
        let g = [3.0, -1.0, 10.0];
        let p = project_row(&row, &g, 0.1, &[0, 1]);
        assert_eq!(p[2], 0.0);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p[0] > p[1]);
        let p = project_row(&row, &g, 10.0, &[0, 1]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn product_tower_reaches_closed_form() {
        let t = Tower::product(&Sft::full(3).unwrap(), &Sft::full(2).unwrap()).unwrap();
        let f = Potential::zero(6);
        let r = optimize(&t, &f, 0.5, &quick()).unwrap();
        let expect = 0.5 * 3f64.ln() + 2f64.ln();
        assert!((r.best_value.lower - expect).abs() < 1e-3);
        assert!(r.best_value.lower <= expect + 1e-9);
        let last = r.trace.last().unwrap().1;
        assert!((last - r.best_value.lower).abs() < 1e-12);
    }

    #[test]
    fn product_tower_with_potential() {
        let table = vec![vec![0.5, -0.3], vec![-1.0, 0.8], vec![0.2, 0.0]];
        let t = Tower::product(&Sft::full(3).unwrap(), &Sft::full(2).unwrap()).unwrap();
        let f = product_potential(&table).unwrap();
        let r = optimize(&t, &f, 0.5, &quick()).unwrap();
        let expect = closed_form_product_tower(&table, 0.5).unwrap();
        assert!((r.best_value.lower - expect).abs() < 1e-3, "{} vs {expect}", r.best_value.lower);
    }

    #[test]
    fn golden_classical() {
        let t = Tower::trivial(Sft::golden_mean());
        let r = optimize(&t, &Potential::zero(2), 0.3, &quick()).unwrap();
        let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((r.best_value.lower - log_phi).abs() < 1e-3);
    }

    #[test]
    fn single_point() {
        let t = Tower::trivial(Sft::point());
        let f = Potential::constant(1, 0.7).unwrap();
        let r = optimize(&t, &f, 0.5, &quick()).unwrap();
        assert!((r.best_value.lower - 0.35).abs() < 1e-12);
    }

    #[test]
    fn reproducible() {
        let b = Sft::new(vec!["a", "b", "c"], &[(0, 0), (0, 1), (1, 2), (2, 0), (2, 2)]).unwrap();
        let t = Tower::product(&Sft::full(2).unwrap(), &b).unwrap();
        let f = Potential::new(vec![0.1, 0.4, -0.3, 0.7, 0.0, -1.0]).unwrap();
        let a = optimize(&t, &f, 0.6, &quick()).unwrap();
        let b = optimize(&t, &f, 0.6, &quick()).unwrap();
        assert_eq!(a.best_measure, b.best_measure);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.start, b.start);
    }

    #[test]
    fn config_defaults_from_partial_json() {
        let c: OptimizerConfig = serde_json::from_str(r#"{"restarts":3}"#).unwrap();
        assert_eq!(c.restarts, 3);
        assert_eq!(c.order, 1);
        assert_eq!(c.n_entropy, 10);
        assert_eq!(c.tol, 1e-9);
    }
}
