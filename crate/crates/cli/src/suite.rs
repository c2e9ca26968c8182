//! The property suite: every structural identity and inequality checked on
//! seeded random towers.

use std::collections::BTreeMap;

use ergopress::measures::{entropy_brackets_upto, relative_entropy_bracket, MarkovMeasure};
use ergopress::pressure::{
    conditional_top_entropy_finite, fekete_bracket, fiber_weights_by_level, sup_weighted,
};
use ergopress::variational::{extremal_measure, weighted_jensen_gap, weighted_objective};
use ergopress::{Potential, Sft, Tower, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::args::GeneratorKind;
use crate::error::CliResult;
use crate::generate::{generate, rng_for};
use crate::report::SuiteRow;

/// Absolute tolerance of exact identities and inequalities.
pub const TOL: f64 = 1e-9;
/// Deepest level of the fiber tables.
pub const LEVELS: usize = 10;
/// Largest `n` and `m` in the subadditivity check.
pub const SPLIT_MAX: usize = 5;
pub const CONVEXITY_LEVELS: usize = 6;
pub const EXTENSION_LEVELS: usize = 8;
/// Level of the entropy brackets in measure-side objectives.
pub const N_ENTROPY: usize = 10;
pub const BRACKET_LEVELS: usize = 12;
pub const EXTREMAL_LEVEL: usize = 12;
/// Allowed shortfall of extremal measures against the Fekete upper bound
/// on full-shift towers.
pub const EXTREMAL_SHORTFALL: f64 = 0.1;
pub const RANDOM_PAIRS: usize = 40;

const CHECK_STREAM: usize = 1 << 32;

#[derive(Debug, Clone, Copy)]
struct Tally {
    checks: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failures: 0,
            worst: f64::INFINITY,
        }
    }

    /// `margin >= 0` passes; NaN fails.
    fn record(&mut self, margin: f64) {
        self.checks += 1;
        if !(margin >= 0.0) {
            self.failures += 1;
        }
        if margin.is_nan() || margin < self.worst {
            self.worst = margin;
        }
    }
}

type Levels = Vec<BTreeMap<Word, f64>>;

fn sup_sequence(levels: &Levels) -> Vec<f64> {
    levels
        .iter()
        .map(|l| l.values().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

/// Runs the suite on towers `0..count` of the given generator.
pub fn run_suite(kind: GeneratorKind, seed: u64, count: usize) -> CliResult<Vec<SuiteRow>> {
    let per_tower: Vec<CliResult<Vec<SuiteRow>>> = (0..count)
        .into_par_iter()
        .map(|i| run_tower(kind, seed, i))
        .collect();
    let mut rows = Vec::new();
    for r in per_tower {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn run_tower(kind: GeneratorKind, seed: u64, index: usize) -> CliResult<Vec<SuiteRow>> {
    let (t, f) = generate(kind, seed, index)?;
    let mut rng = rng_for(seed, CHECK_STREAM + index);
    let omegas = [0.0, 0.5, 1.0, rng.gen_range(0.0..1.0)];
    let levels: Vec<Levels> = omegas
        .iter()
        .map(|&w| fiber_weights_by_level(&t, &f, w, LEVELS))
        .collect::<Result<_, _>>()?;
    let uppers: Vec<f64> = levels
        .iter()
        .map(|l| fekete_bracket(&sup_sequence(l)).upper)
        .collect();

    let parry = MarkovMeasure::parry(t.x(), 1)?;
    let randoms = [
        MarkovMeasure::random(t.x(), 1, &mut rng)?,
        MarkovMeasure::random(t.x(), 1, &mut rng)?,
    ];
    let extremals: Vec<MarkovMeasure> = omegas
        .iter()
        .map(|&w| {
            let (_, zeta) = sup_weighted(&t, &f, w, EXTREMAL_LEVEL)?;
            extremal_measure(&t, &f, w, &zeta, EXTREMAL_LEVEL, 1)
        })
        .collect::<Result<_, _>>()?;

    let mut tested: Vec<&MarkovMeasure> = vec![&parry];
    tested.extend(randoms.iter());
    tested.extend(extremals.iter());

    let mut out: Vec<(&str, Tally)> = vec![
        ("subadditivity", subadditivity(&levels)),
        ("uniform_bound", uniform_bound(&t, &f, &omegas, &levels)),
        ("power_rule", power_rule(&t, &f, &omegas, &levels)?),
        ("extension_monotonicity", extension(&t, &f, &omegas, &levels)?),
        ("omega_log_convexity", omega_convexity(&t, &f)?),
        ("bracket_sandwich", bracket_sandwich(&t, &[&parry, &randoms[0]])?),
        ("weighted_jensen", jensen(&mut rng)?),
        ("power_subadditivity", power_subadditivity(&mut rng)),
        ("one_sided_vp", one_sided_vp(&t, &f, &omegas, &uppers, &tested)?),
        ("relative_vp", relative_vp(&t, &tested)?),
    ];
    let (vs_parry, vs_top) = extremal_quality(&t, &f, &omegas, &uppers, &parry, &extremals)?;
    out.push(("extremal_vs_maxent", vs_parry));
    if t.x().is_full() {
        out.push(("extremal_vs_topological", vs_top));
    }

    let shape = format!("{}-{}-{}", t.x().len(), t.y().len(), t.z().len());
    Ok(out
        .into_iter()
        .map(|(name, tally)| SuiteRow {
            tower: index,
            shape: shape.clone(),
            property: name.to_string(),
            checks: tally.checks,
            failures: tally.failures,
            worst_margin: tally.worst,
            pass: tally.failures == 0,
        })
        .collect())
}

fn subadditivity(levels: &[Levels]) -> Tally {
    let mut tally = Tally::new();
    for l in levels {
        for n in 1..=SPLIT_MAX {
            for m in 1..=SPLIT_MAX {
                for (w, &v) in &l[n + m - 1] {
                    let head = l[n - 1].get(&Word(w[..n].to_vec()));
                    let tail = l[m - 1].get(&Word(w[n..].to_vec()));
                    match (head, tail) {
                        (Some(a), Some(b)) => tally.record(a + b + TOL - v),
                        _ => tally.record(f64::NAN),
                    }
                }
            }
        }
    }
    tally
}

fn uniform_bound(t: &Tower, f: &Potential, omegas: &[f64], levels: &[Levels]) -> Tally {
    let mut tally = Tally::new();
    let ly = (t.y().len() as f64).ln();
    let lx = (t.x().len() as f64).ln();
    for (&w, l) in omegas.iter().zip(levels) {
        let bound = ly + w * (lx + f.sup_norm());
        for (i, level) in l.iter().enumerate() {
            let n = (i + 1) as f64;
            for &v in level.values() {
                tally.record(bound - v / n + TOL);
            }
        }
    }
    tally
}

fn power_rule(t: &Tower, f: &Potential, omegas: &[f64], levels: &[Levels]) -> CliResult<Tally> {
    let mut tally = Tally::new();
    for k in [2, 3] {
        let (tk, fk) = t.power(f, k)?;
        let (_, rz) = t.z().power(k)?;
        let nmax = LEVELS / k;
        for (&w, l) in omegas.iter().zip(levels) {
            let lk = fiber_weights_by_level(&tk, &fk, w, nmax)?;
            for n in 1..=nmax {
                let orig = &l[k * n - 1];
                if lk[n - 1].len() != orig.len() {
                    tally.record(f64::NAN);
                }
                for (zw, &v) in &lk[n - 1] {
                    match orig.get(&rz.decode(zw)) {
                        Some(&o) => tally.record(TOL - (v - o).abs()),
                        None => tally.record(f64::NAN),
                    }
                }
            }
        }
    }
    Ok(tally)
}

fn extension(t: &Tower, f: &Potential, omegas: &[f64], levels: &[Levels]) -> CliResult<Tally> {
    let mut tally = Tally::new();
    let (te, fe) = t.extend_by_product(&Sft::full(2)?, f)?;
    for (&w, l) in omegas.iter().zip(levels) {
        let le = fiber_weights_by_level(&te, &fe, w, EXTENSION_LEVELS)?;
        for (n, level) in le.iter().enumerate() {
            for (zw, &v) in level {
                match l[n].get(zw) {
                    Some(&o) => tally.record(v - o + TOL),
                    None => tally.record(f64::NAN),
                }
            }
        }
    }
    Ok(tally)
}

fn omega_convexity(t: &Tower, f: &Potential) -> CliResult<Tally> {
    let mut tally = Tally::new();
    let grid: Vec<Levels> = (0..=10)
        .map(|i| fiber_weights_by_level(t, f, i as f64 / 10.0, CONVEXITY_LEVELS))
        .collect::<Result<_, _>>()?;
    for n in 0..CONVEXITY_LEVELS {
        for zw in grid[0][n].keys() {
            let v: Vec<f64> = grid.iter().map(|g| g[n][zw]).collect();
            for i in 1..v.len() - 1 {
                tally.record(v[i - 1] - 2.0 * v[i] + v[i + 1] + TOL);
            }
        }
    }
    Ok(tally)
}

fn bracket_sandwich(t: &Tower, measures: &[&MarkovMeasure]) -> CliResult<Tally> {
    let mut tally = Tally::new();
    for mu in measures {
        for code in [t.pi(), t.psi()] {
            let b = entropy_brackets_upto(mu, code, BRACKET_LEVELS)?;
            for w in b.windows(2) {
                tally.record(w[1].lower - w[0].lower + TOL);
                tally.record(w[1].upper - w[1].lower + TOL);
                tally.record(w[0].upper - w[1].upper + TOL);
            }
        }
    }
    Ok(tally)
}

fn jensen(rng: &mut ChaCha8Rng) -> CliResult<Tally> {
    let mut tally = Tally::new();
    for _ in 0..RANDOM_PAIRS {
        let len = rng.gen_range(1..=6);
        let c: Vec<f64> = (0..len).map(|_| rng.gen_range(-5.0..=5.0)).collect();
        let mut p: Vec<f64> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    0.0
                } else {
                    -rng.gen_range(f64::EPSILON..1.0f64).ln()
                }
            })
            .collect();
        if p.iter().all(|&x| x == 0.0) {
            p[0] = 1.0;
        }
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        tally.record(weighted_jensen_gap(&p, &c)? + 1e-12);

        let m = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut gibbs: Vec<f64> = c.iter().map(|x| (x - m).exp()).collect();
        let z: f64 = gibbs.iter().sum();
        gibbs.iter_mut().for_each(|x| *x /= z);
        tally.record(TOL - weighted_jensen_gap(&gibbs, &c)?.abs());
    }
    Ok(tally)
}

fn power_subadditivity(rng: &mut ChaCha8Rng) -> Tally {
    let mut tally = Tally::new();
    for _ in 0..RANDOM_PAIRS {
        let x: f64 = rng.gen_range(0.0..10.0);
        let y: f64 = rng.gen_range(0.0..10.0);
        let w: f64 = rng.gen_range(0.0..=1.0);
        tally.record(x.powf(w) + y.powf(w) - (x + y).powf(w) + 1e-12);
    }
    tally
}

fn one_sided_vp(
    t: &Tower,
    f: &Potential,
    omegas: &[f64],
    uppers: &[f64],
    measures: &[&MarkovMeasure],
) -> CliResult<Tally> {
    let mut tally = Tally::new();
    for (&w, &upper) in omegas.iter().zip(uppers) {
        for mu in measures {
            let v = weighted_objective(t, mu, f, w, N_ENTROPY)?;
            tally.record(upper + v.width() + TOL - v.lower);
        }
    }
    Ok(tally)
}

/// `h_μ(T | S)` never exceeds the growth rate of the largest π-fiber.
fn relative_vp(t: &Tower, measures: &[&MarkovMeasure]) -> CliResult<Tally> {
    let mut tally = Tally::new();
    let counts: Vec<f64> = (1..=LEVELS)
        .map(|n| conditional_top_entropy_finite(t.pi(), n))
        .collect::<Result<_, _>>()?;
    let upper = fekete_bracket(&counts).upper;
    for mu in measures {
        let b = relative_entropy_bracket(mu, &[t.pi()], N_ENTROPY)?;
        tally.record(upper + b.width() + TOL - b.lower);
    }
    Ok(tally)
}

fn extremal_quality(
    t: &Tower,
    f: &Potential,
    omegas: &[f64],
    uppers: &[f64],
    parry: &MarkovMeasure,
    extremals: &[MarkovMeasure],
) -> CliResult<(Tally, Tally)> {
    let mut vs_parry = Tally::new();
    let mut vs_top = Tally::new();
    for ((&w, &upper), ext) in omegas.iter().zip(uppers).zip(extremals) {
        let e = weighted_objective(t, ext, f, w, N_ENTROPY)?;
        let p = weighted_objective(t, parry, f, w, N_ENTROPY)?;
        vs_parry.record(e.lower - (p.lower - TOL));
        vs_top.record(e.lower - (upper - EXTREMAL_SHORTFALL));
    }
    Ok((vs_parry, vs_top))
}
