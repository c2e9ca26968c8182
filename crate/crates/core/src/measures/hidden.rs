//! Pushforwards of Markov measures through 1-block codes.
//!
//! The image of a Markov measure is a hidden Markov process: the hidden
//! state is the m-block, and it emits the code image of its first symbol.
//! Word probabilities come from the forward recursion; entropy rates are
//! bracketed by
//!
//! ```text
//! H(Y_n | Y_1..Y_{n-1}, B_1)  <=  h  <=  H(Y_n | Y_1..Y_{n-1})
//! ```
//!
//! where `B_1` is the hidden block at time 1. The lower side is
//! nondecreasing in `n`, the upper side nonincreasing.

use std::collections::BTreeMap;

use super::entropy::entropy_markov;
use super::markov::MarkovMeasure;
use crate::numeric::neg_xlogx;
use crate::symbolic::{SlidingBlockCode, Word};
use crate::{Error, Result};

/// Two-sided bound on an entropy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBracket {
    pub lower: f64,
    pub upper: f64,
    pub n_used: usize,
}

impl EntropyBracket {
    pub fn exact(v: f64, n_used: usize) -> Self {
        Self {
            lower: v,
            upper: v,
            n_used,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// Interval difference `self - other`.
    pub fn minus(&self, other: &EntropyBracket) -> EntropyBracket {
        EntropyBracket {
            lower: self.lower - other.upper,
            upper: self.upper - other.lower,
            n_used: self.n_used.max(other.n_used),
        }
    }
}

fn check_source(mu: &MarkovMeasure, code: &SlidingBlockCode) -> Result<()> {
    if code.source() != mu.base() {
        return Err(Error::DimensionMismatch(
            "code source differs from the measure's shift".into(),
        ));
    }
    Ok(())
}

/// Entropies of target word blocks.
///
/// `h[k] = H(Y_1..Y_k)` and `g[k] = H(B_1, Y_1..Y_k)` for `k = 0..=nmax`.
struct BlockEntropies {
    h: Vec<f64>,
    g: Vec<f64>,
}

/// Forward traversal over target words. At each node the state holds, for
/// each initial block `b0` that emits the first target symbol, the vector
/// `P(B_1 = b0, Y_1..Y_k = v, B_k = ·)`.
fn forward_walk<V>(mu: &MarkovMeasure, code: &SlidingBlockCode, nmax: usize, mut visit: V)
where
    V: FnMut(&[usize], &[(usize, Vec<f64>)]),
{
    let blocks = mu.blocks();
    let recoding = mu.recoding();
    let nb = blocks.len();
    let emit: Vec<usize> = (0..nb).map(|b| code.image(recoding.first_symbol(b))).collect();
    let ny = code.target().len();
    let mut by_symbol: Vec<Vec<usize>> = vec![Vec::new(); ny];
    for (b, &y) in emit.iter().enumerate() {
        by_symbol[y].push(b);
    }
    let kernel = mu.kernel();
    let pi = mu.stationary();

    struct Ctx<'a, V> {
        blocks: &'a crate::symbolic::Sft,
        kernel: &'a [Vec<f64>],
        by_symbol: &'a [Vec<usize>],
        emit: &'a [usize],
        nmax: usize,
        visit: V,
        word: Vec<usize>,
    }

    fn rec<V: FnMut(&[usize], &[(usize, Vec<f64>)])>(ctx: &mut Ctx<'_, V>, state: &[(usize, Vec<f64>)]) {
        if ctx.word.len() == ctx.nmax {
            return;
        }
        let nb = ctx.emit.len();
        for y in 0..ctx.by_symbol.len() {
            if ctx.by_symbol[y].is_empty() {
                continue;
            }
            let mut next: Vec<(usize, Vec<f64>)> = Vec::with_capacity(state.len());
            let mut total = 0.0;
            for (b0, alpha) in state {
                let mut a2 = vec![0.0; nb];
                for (i, &ai) in alpha.iter().enumerate() {
                    if ai == 0.0 {
                        continue;
                    }
                    for &j in ctx.blocks.successors(i) {
                        if ctx.emit[j] == y {
                            a2[j] += ai * ctx.kernel[i][j];
                        }
                    }
                }
                let s: f64 = a2.iter().sum();
                if s > 0.0 {
                    total += s;
                    next.push((*b0, a2));
                }
            }
            if total <= 0.0 {
                continue;
            }
            ctx.word.push(y);
            (ctx.visit)(&ctx.word, &next);
            rec(ctx, &next);
            ctx.word.pop();
        }
    }

    let mut ctx = Ctx {
        blocks,
        kernel,
        by_symbol: &by_symbol,
        emit: &emit,
        nmax,
        visit: &mut visit,
        word: Vec::with_capacity(nmax),
    };
    if nmax == 0 {
        return;
    }
    for y in 0..ny {
        let state: Vec<(usize, Vec<f64>)> = by_symbol[y]
            .iter()
            .filter(|&&b| pi[b] > 0.0)
            .map(|&b| {
                let mut a = vec![0.0; nb];
                a[b] = pi[b];
                (b, a)
            })
            .collect();
        if state.is_empty() {
            continue;
        }
        ctx.word.push(y);
        (ctx.visit)(&ctx.word, &state);
        rec(&mut ctx, &state);
        ctx.word.pop();
    }
}

fn block_entropies(mu: &MarkovMeasure, code: &SlidingBlockCode, nmax: usize) -> BlockEntropies {
    let mut h = vec![0.0; nmax + 1];
    let mut g = vec![0.0; nmax + 1];
    g[0] = mu.stationary().iter().map(|&p| neg_xlogx(p)).sum();
    forward_walk(mu, code, nmax, |v, state| {
        let k = v.len();
        let mut total = 0.0;
        for (_, alpha) in state {
            let s: f64 = alpha.iter().sum();
            g[k] += neg_xlogx(s);
            total += s;
        }
        h[k] += neg_xlogx(total);
    });
    BlockEntropies { h, g }
}

/// Exact distribution of target `n`-words, lexicographic.
pub fn pushforward_word_distribution(
    mu: &MarkovMeasure,
    code: &SlidingBlockCode,
    n: usize,
) -> Result<BTreeMap<Word, f64>> {
    check_source(mu, code)?;
    let mut out = BTreeMap::new();
    if n == 0 {
        out.insert(Word::empty(), 1.0);
        return Ok(out);
    }
    forward_walk(mu, code, n, |v, state| {
        if v.len() == n {
            let p: f64 = state.iter().map(|(_, a)| a.iter().sum::<f64>()).sum();
            out.insert(Word(v.to_vec()), p);
        }
    });
    Ok(out)
}

/// Brackets on the entropy rate of the image measure, at every level
/// `2..=nmax`. Entry `i` is the bracket at `n = i + 2`.
pub fn entropy_brackets_upto(
    mu: &MarkovMeasure,
    code: &SlidingBlockCode,
    nmax: usize,
) -> Result<Vec<EntropyBracket>> {
    check_source(mu, code)?;
    if nmax < 2 {
        return Err(Error::InsufficientN { n: nmax, min: 2 });
    }
    if code.is_trivial_target() {
        return Ok((2..=nmax).map(|n| EntropyBracket::exact(0.0, n)).collect());
    }
    if code.is_identity() {
        let h = entropy_markov(mu);
        return Ok((2..=nmax).map(|n| EntropyBracket::exact(h, n)).collect());
    }
    let e = block_entropies(mu, code, nmax);
    Ok((2..=nmax)
        .map(|n| {
            let upper = (e.h[n] - e.h[n - 1]).max(0.0);
            let lower = (e.g[n] - e.g[n - 1]).max(0.0).min(upper);
            EntropyBracket {
                lower,
                upper,
                n_used: n,
            }
        })
        .collect())
}

/// Bracket on `h(code μ)` at level `n >= 2`.
pub fn entropy_bracket_pushforward(
    mu: &MarkovMeasure,
    code: &SlidingBlockCode,
    n: usize,
) -> Result<EntropyBracket> {
    if n < 2 {
        return Err(Error::InsufficientN { n, min: 2 });
    }
    Ok(*entropy_brackets_upto(mu, code, n)?
        .last()
        .expect("n >= 2 gives one bracket"))
}

/// Bracket on the relative entropy `h_μ(T | terminal factor)` of the chain
/// `X -> ... -> terminal`, as `h_μ(T) - h(image)` in interval arithmetic.
pub fn relative_entropy_bracket(
    mu: &MarkovMeasure,
    chain: &[&SlidingBlockCode],
    n: usize,
) -> Result<EntropyBracket> {
    let (first, rest) = chain
        .split_first()
        .ok_or_else(|| Error::Invalid("empty code chain".into()))?;
    let mut code = (*first).clone();
    for c in rest {
        code = code.then(c)?;
    }
    let h = entropy_markov(mu);
    let image = entropy_bracket_pushforward(mu, &code, n)?;
    Ok(EntropyBracket::exact(h, n).minus(&image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::entropy::partition_entropy;
    use crate::symbolic::Sft;

    fn product_code() -> SlidingBlockCode {
        SlidingBlockCode::project_right(&Sft::full(2).unwrap(), &Sft::full(2).unwrap()).unwrap()
    }

    #[test]
    fn identity_bracket_is_exact() {
        let mu = MarkovMeasure::parry(&Sft::golden_mean(), 1).unwrap();
        let id = SlidingBlockCode::identity(Sft::golden_mean());
        for n in 2..=6 {
            let b = entropy_bracket_pushforward(&mu, &id, n).unwrap();
            assert_eq!(b.lower, b.upper);
            assert!((b.lower - entropy_markov(&mu)).abs() < 1e-15);
        }
    }

    #[test]
    fn generic_path_matches_markov_entropy_for_identity_rule() {
        // same chain seen through an injective relabelling runs the generic path
        let g = Sft::golden_mean();
        let mu = MarkovMeasure::parry(&g, 1).unwrap();
        let code = SlidingBlockCode::new(g.clone(), Sft::full(2).unwrap(), vec![0, 1]).unwrap();
        for n in 2..=8 {
            let b = entropy_bracket_pushforward(&mu, &code, n).unwrap();
            assert!((b.lower - entropy_markov(&mu)).abs() < 1e-12);
            assert!((b.upper - entropy_markov(&mu)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_code_bracket() {
        let mu = MarkovMeasure::parry(&Sft::golden_mean(), 1).unwrap();
        let c = SlidingBlockCode::to_point(Sft::golden_mean());
        let b = entropy_bracket_pushforward(&mu, &c, 4).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        let d = pushforward_word_distribution(&mu, &c, 4).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[&Word(vec![0; 4])] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_marginal_oracle() {
        // p(a,b) = p_A(a) p_B(b) with p_B = (.7,.3)
        let pa = [0.4, 0.6];
        let pb = [0.7, 0.3];
        let p: Vec<f64> = pa.iter().flat_map(|a| pb.iter().map(move |b| a * b)).collect();
        let code = product_code();
        let mu = MarkovMeasure::bernoulli(code.source(), &p).unwrap();
        let h = partition_entropy(&pb).unwrap();
        assert!((h - 0.6109).abs() < 5e-5);
        for n in 2..=6 {
            let b = entropy_bracket_pushforward(&mu, &code, n).unwrap();
            assert!(b.lower <= h + 1e-12 && h <= b.upper + 1e-12);
        }
    }

    #[test]
    fn projection_of_uniform_is_uniform() {
        let code = product_code();
        let mu = MarkovMeasure::bernoulli(code.source(), &[0.25; 4]).unwrap();
        let d = pushforward_word_distribution(&mu, &code, 5).unwrap();
        assert_eq!(d.len(), 32);
        assert!(d.values().all(|p| (p - 1.0 / 32.0).abs() < 1e-15));
    }

    #[test]
    fn identity_distribution_matches_chain() {
        let g = Sft::golden_mean();
        let mu = MarkovMeasure::parry(&g, 1).unwrap();
        let id = SlidingBlockCode::identity(g.clone());
        let d = pushforward_word_distribution(&mu, &id, 4).unwrap();
        for (w, p) in &d {
            let mut q = mu.stationary()[w[0]];
            for s in w.windows(2) {
                q *= mu.kernel()[s[0]][s[1]];
            }
            assert!((p - q).abs() < 1e-15);
        }
        assert_eq!(d.len(), 8);
    }

    #[test]
    fn relative_entropy_examples() {
        let g = Sft::golden_mean();
        let mu = MarkovMeasure::parry(&g, 1).unwrap();
        let to_pt = SlidingBlockCode::to_point(g.clone());
        let r = relative_entropy_bracket(&mu, &[&to_pt], 3).unwrap();
        assert_eq!((r.lower, r.upper), (entropy_markov(&mu), entropy_markov(&mu)));
        let id = SlidingBlockCode::identity(g);
        let r = relative_entropy_bracket(&mu, &[&id], 3).unwrap();
        assert_eq!((r.lower, r.upper), (0.0, 0.0));

        let code = product_code();
        let p = [0.1, 0.2, 0.3, 0.4];
        let mu = MarkovMeasure::bernoulli(code.source(), &p).unwrap();
        let r = relative_entropy_bracket(&mu, &[&code], 4).unwrap();
        let h_ab = partition_entropy(&p).unwrap();
        let h_b = partition_entropy(&[0.4, 0.6]).unwrap();
        assert!((r.lower - (h_ab - h_b)).abs() < 1e-12);
        assert!((r.upper - (h_ab - h_b)).abs() < 1e-12);
    }

    #[test]
    fn insufficient_n() {
        let mu = MarkovMeasure::parry(&Sft::golden_mean(), 1).unwrap();
        let c = SlidingBlockCode::identity(Sft::golden_mean());
        assert_eq!(
            entropy_bracket_pushforward(&mu, &c, 1),
            Err(Error::InsufficientN { n: 1, min: 2 })
        );
    }
}
