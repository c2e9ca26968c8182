//! Topological side: finite-level pressure sums and ω-weighted fiber sums.
//!
//! For a Z-word `ζ` of length `n`, the weighted sum is
//!
//! ```text
//! W_n(ζ) = Σ_{v ∈ L_n(Y), φ(v) = ζ} W_v^ω,   W_v = Σ_{u ∈ L_n(X), π(u) = v} exp(S_n f(u))
//! ```
//!
//! Fiber words `v` are visited depth first in lexicographic order. Each depth
//! keeps one log-domain vector over X-symbols holding the partial inner sums
//! of the current prefix, so X-words are never materialized.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::numeric::LogSumExp;
use crate::symbolic::{Potential, SlidingBlockCode, Sft, Tower, Word};
use crate::{Error, Result};

/// Per-fiber-word inner sums over one Z-word.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberWeightTable {
    pub zword: Word,
    /// `(v, log W_v)` for every fiber Y-word, lexicographic in `v`.
    pub entries: Vec<(Word, f64)>,
    /// `log Σ_v W_v^ω`.
    pub total: f64,
}

/// Fekete summary of a subadditive sequence `a_1, ..., a_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureEstimate {
    pub values: Vec<f64>,
    /// `min_n a_n / n`, an upper bound on the limit.
    pub upper: f64,
    /// `(a_N - a_{⌊N/2⌋}) / (N - ⌊N/2⌋)` with `a_0 = 0`.
    pub extrapolated: f64,
    pub nmax: usize,
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&omega) || omega.is_nan() {
        return Err(Error::InvalidOmega(omega));
    }
    Ok(())
}

fn check_potential(sft: &Sft, f: &Potential) -> Result<()> {
    if f.len() != sft.len() {
        return Err(Error::DimensionMismatch(format!(
            "potential has {} values for {} symbols",
            f.len(),
            sft.len()
        )));
    }
    Ok(())
}

/// `log Σ_{w ∈ L_n} exp(S_n f(w))` by a log-domain transfer recursion.
pub fn pressure_finite(sft: &Sft, f: &Potential, n: usize) -> Result<f64> {
    check_potential(sft, f)?;
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let k = sft.len();
    let mut cur: Vec<f64> = f.values().to_vec();
    for _ in 1..n {
        let next: Vec<f64> = (0..k)
            .map(|t| {
                let mut acc = LogSumExp::new();
                for &s in sft.predecessors(t) {
                    acc.push(cur[s]);
                }
                acc.value() + f.value(t)
            })
            .collect();
        cur = next;
    }
    let mut acc = LogSumExp::new();
    for v in cur {
        acc.push(v);
    }
    Ok(acc.value())
}

/// Depth-first traversal of target words of `code` with source-side partial
/// sums. `allow(depth, b)` filters the symbol placed at position `depth`;
/// `visit(v, log_w)` is called at every node with the node's word and the
/// log inner sum `log W_v`, plus the forward vectors `inner[0..depth]`
/// where `inner[s][t]` is the log of the sum of `exp(S f(u))` over source
/// words `u` of length `s + 1` ending in `t` with `π(u) = v[..=s]`.
/// Returning `false` from `visit` prunes below.
pub(crate) fn walk_fiber<A, V>(
    code: &SlidingBlockCode,
    f: &Potential,
    max_depth: usize,
    allow: A,
    mut visit: V,
) where
    A: Fn(usize, usize) -> bool,
    V: FnMut(&[usize], f64, &[Vec<f64>]) -> bool,
{
    let xs = code.source();
    let k = xs.len();
    let mut inner: Vec<Vec<f64>> = vec![vec![f64::NEG_INFINITY; k]; max_depth];
    let mut word: Vec<usize> = Vec::with_capacity(max_depth);

    fn leaf_value(vec: &[f64], support: &[usize]) -> f64 {
        let mut acc = LogSumExp::new();
        for &t in support {
            acc.push(vec[t]);
        }
        acc.value()
    }

    #[allow(clippy::too_many_arguments)]
    fn rec<A, V>(
        code: &SlidingBlockCode,
        f: &Potential,
        max_depth: usize,
        allow: &A,
        visit: &mut V,
        inner: &mut Vec<Vec<f64>>,
        word: &mut Vec<usize>,
    ) where
        A: Fn(usize, usize) -> bool,
        V: FnMut(&[usize], f64, &[Vec<f64>]) -> bool,
    {
        let depth = word.len();
        if depth == max_depth {
            return;
        }
        let ys = code.target();
        let xs = code.source();
        let candidates: Vec<usize> = match word.last() {
            None => (0..ys.len()).collect(),
            Some(&b) => ys.successors(b).to_vec(),
        };
        for b in candidates {
            if !allow(depth, b) {
                continue;
            }
            let (before, after) = inner.split_at_mut(depth);
            let row = &mut after[0];
            row.iter_mut().for_each(|x| *x = f64::NEG_INFINITY);
            let mut any = false;
            for &t in code.preimages(b) {
                let v = if depth == 0 {
                    f.value(t)
                } else {
                    let prev = &before[depth - 1];
                    let mut acc = LogSumExp::new();
                    for &s in xs.predecessors(t) {
                        acc.push(prev[s]);
                    }
                    let lse = acc.value();
                    if lse == f64::NEG_INFINITY {
                        continue;
                    }
                    lse + f.value(t)
                };
                row[t] = v;
                any = true;
            }
            if !any {
                continue;
            }
            word.push(b);
            let lw = leaf_value(&inner[depth], code.preimages(b));
            if visit(word, lw, &inner[..=depth]) {
                rec(code, f, max_depth, allow, visit, inner, word);
            }
            word.pop();
        }
    }

    rec(code, f, max_depth, &allow, &mut visit, &mut inner, &mut word);
}

fn check_zword(t: &Tower, zeta: &[usize], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    if zeta.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "Z-word has length {} but n = {n}",
            zeta.len()
        )));
    }
    t.z().check_word(zeta)
}

/// Streams `ω log W_v` for every fiber word `v` over `zeta` into `sink`,
/// lexicographically in `v`.
fn fiber_leaves<S: FnMut(&[usize], f64)>(
    t: &Tower,
    f: &Potential,
    zeta: &[usize],
    mut sink: S,
) {
    let n = zeta.len();
    let phi = t.phi();
    walk_fiber(
        t.pi(),
        f,
        n,
        |d, b| phi.image(b) == zeta[d],
        |v, lw, _| {
            if v.len() == n {
                sink(v, lw);
            }
            true
        },
    );
}

/// The weighted fiber table over `zeta` at level `n`.
pub fn weighted_fiber_weight(
    t: &Tower,
    f: &Potential,
    omega: f64,
    zeta: &[usize],
    n: usize,
) -> Result<FiberWeightTable> {
    check_omega(omega)?;
    check_potential(t.x(), f)?;
    check_zword(t, zeta, n)?;
    let mut entries = Vec::new();
    let mut acc = LogSumExp::new();
    fiber_leaves(t, f, zeta, |v, lw| {
        entries.push((Word(v.to_vec()), lw));
        acc.push(omega * lw);
    });
    if entries.is_empty() {
        return Err(Error::EmptyFiber {
            zword: zeta.to_vec(),
        });
    }
    Ok(FiberWeightTable {
        zword: Word(zeta.to_vec()),
        entries,
        total: acc.value(),
    })
}

/// `log W_n(ζ)` without materializing the per-word table.
pub fn log_fiber_weight(t: &Tower, f: &Potential, omega: f64, zeta: &[usize]) -> Result<f64> {
    check_omega(omega)?;
    check_potential(t.x(), f)?;
    check_zword(t, zeta, zeta.len())?;
    log_fiber_weight_unchecked(t, f, omega, zeta)
}

fn log_fiber_weight_unchecked(t: &Tower, f: &Potential, omega: f64, zeta: &[usize]) -> Result<f64> {
    let mut acc = LogSumExp::new();
    let mut seen = false;
    fiber_leaves(t, f, zeta, |_, lw| {
        acc.push(omega * lw);
        seen = true;
    });
    if !seen {
        return Err(Error::EmptyFiber {
            zword: zeta.to_vec(),
        });
    }
    Ok(acc.value())
}

/// `log W_k(ζ)` for every admissible Z-word of every length `1..=nmax`, from
/// a single traversal. Entry `k - 1` holds the length-`k` words.
///
/// Each node of the traversal is a leaf for its own length, and the
/// contributions to one `ζ` arrive in the same order as in
/// [`log_fiber_weight`], so the values agree bit for bit.
pub fn fiber_weights_by_level(
    t: &Tower,
    f: &Potential,
    omega: f64,
    nmax: usize,
) -> Result<Vec<BTreeMap<Word, f64>>> {
    check_omega(omega)?;
    check_potential(t.x(), f)?;
    let phi = t.phi();
    let mut acc: Vec<BTreeMap<Word, LogSumExp>> = vec![BTreeMap::new(); nmax];
    walk_fiber(
        t.pi(),
        f,
        nmax,
        |_, _| true,
        |v, lw, _| {
            let z: Vec<usize> = v.iter().map(|&b| phi.image(b)).collect();
            acc[v.len() - 1]
                .entry(Word(z))
                .or_default()
                .push(omega * lw);
            true
        },
    );
    let out: Vec<BTreeMap<Word, f64>> = acc
        .into_iter()
        .map(|m| m.into_iter().map(|(k, a)| (k, a.value())).collect())
        .collect();
    // every admissible Z-word must be covered
    for (k, level) in out.iter().enumerate() {
        if (level.len() as u128) != t.z().count_words(k + 1) {
            let missing = t
                .z()
                .enumerate_words(k + 1)
                .into_iter()
                .find(|w| !level.contains_key(w))
                .unwrap_or_default();
            return Err(Error::EmptyFiber { zword: missing.0 });
        }
    }
    Ok(out)
}

/// `max_ζ log W_n(ζ)` over admissible Z-words, with the lexicographically
/// first maximizer.
pub fn sup_weighted(t: &Tower, f: &Potential, omega: f64, n: usize) -> Result<(f64, Word)> {
    check_omega(omega)?;
    check_potential(t.x(), f)?;
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let zwords = t.z().enumerate_words(n);
    let values: Vec<Result<f64>> = zwords
        .par_iter()
        .map(|z| log_fiber_weight_unchecked(t, f, omega, z))
        .collect();
    let mut best: Option<(f64, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, i));
        }
    }
    let (v, i) = best.ok_or(Error::EmptyShift)?;
    Ok((v, zwords[i].clone()))
}

/// `a_n = max_ζ log W_n(ζ)` for `n = 1..=nmax`.
pub fn sup_weighted_sequence(
    t: &Tower,
    f: &Potential,
    omega: f64,
    nmax: usize,
) -> Result<Vec<(f64, Word)>> {
    (1..=nmax).map(|n| sup_weighted(t, f, omega, n)).collect()
}

/// Average of `log W_n` over the orbit of the periodic point `base^∞`:
/// `(1/p) Σ_{i<p} log W_n(ζ_i)` where `ζ_i` is the `n`-prefix of the i-th shift.
pub fn orbit_average_weighted(
    t: &Tower,
    f: &Potential,
    omega: f64,
    base: &[usize],
    n: usize,
) -> Result<f64> {
    check_omega(omega)?;
    check_potential(t.x(), f)?;
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let p = base.len();
    let z = t.z();
    let periodic = p > 0
        && base.iter().all(|&s| s < z.len())
        && z.is_admissible(base)
        && z.is_allowed(base[p - 1], base[0]);
    if !periodic {
        return Err(Error::InadmissiblePeriod {
            base: base.to_vec(),
        });
    }
    let mut sum = 0.0;
    for i in 0..p {
        let zeta: Vec<usize> = (0..n).map(|j| base[(i + j) % p]).collect();
        sum += log_fiber_weight_unchecked(t, f, omega, &zeta)?;
    }
    Ok(sum / p as f64)
}

/// Upper estimate and point estimate of `lim a_n / n` for a subadditive
/// sequence given as `a_1, ..., a_N`.
pub fn fekete_bracket(values: &[f64]) -> PressureEstimate {
    let nmax = values.len();
    let upper = values
        .iter()
        .enumerate()
        .map(|(i, a)| a / (i + 1) as f64)
        .fold(f64::INFINITY, f64::min);
    let extrapolated = if nmax == 0 {
        f64::NAN
    } else {
        let half = nmax / 2;
        let a_half = if half == 0 { 0.0 } else { values[half - 1] };
        (values[nmax - 1] - a_half) / (nmax - half) as f64
    };
    PressureEstimate {
        values: values.to_vec(),
        upper,
        extrapolated,
        nmax,
    }
}

/// `max_v log #{u ∈ L_n(source) : code(u) = v}` over admissible target `n`-words.
pub fn conditional_top_entropy_finite(code: &SlidingBlockCode, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let zero = Potential::zero(code.source().len());
    let mut best = f64::NEG_INFINITY;
    walk_fiber(
        code,
        &zero,
        n,
        |_, _| true,
        |v, lw, _| {
            if v.len() == n && lw > best {
                best = lw;
            }
            true
        },
    );
    if best == f64::NEG_INFINITY {
        return Err(Error::EmptyShift);
    }
    Ok(best)
}
