//! Markov measures built from level-`n` fiber weights.
//!
//! Every X-word `u` over the Z-word `ζ` gets mass
//!
//! ```text
//! q(u) = W_{π(u)}^{ω-1} exp(S_n f(u)) / W_n(ζ)
//! ```
//!
//! and the `(m+1)`-blocks of `u` are counted at every offset `0..n-m`. The
//! averaged block frequencies define a kernel on the m-block graph.

use crate::measures::{communicating_classes, MarkovMeasure};
use crate::numeric::LogSumExp;
use crate::pressure::{check_omega, log_fiber_weight, walk_fiber};
use crate::symbolic::{Potential, Tower, Word};
use crate::{Error, Result};

/// Shift-averaged `(m+1)`-block frequencies of the weighted fiber over
/// `zeta`, one entry per admissible `(m+1)`-word of X in lexicographic order.
pub fn extremal_block_frequencies(
    t: &Tower,
    f: &Potential,
    omega: f64,
    zeta: &[usize],
    m: usize,
) -> Result<Vec<(Word, f64)>> {
    check_omega(omega)?;
    let n = zeta.len();
    if n <= m {
        return Err(Error::OrderTooLarge { order: m, n });
    }
    let total = log_fiber_weight(t, f, omega, zeta)?;
    let x = t.x();
    let pi = t.pi();
    let phi = t.phi();
    let words = x.enumerate_words(m + 1);
    let mut freq = vec![0.0; words.len()];
    let offsets = (n - m) as f64;
    let k = x.len();
    let mut beta = vec![vec![0.0; k]; n];

    walk_fiber(
        pi,
        f,
        n,
        |d, b| phi.image(b) == zeta[d],
        |v, lw, inner| {
            if v.len() < n {
                return true;
            }
            beta[n - 1].iter_mut().for_each(|x| *x = 0.0);
            for s in (0..n - 1).rev() {
                let (head, tail) = beta.split_at_mut(s + 1);
                let next = &tail[0];
                for (a, slot) in head[s].iter_mut().enumerate() {
                    let mut acc = LogSumExp::new();
                    for &b in x.successors(a) {
                        if pi.image(b) == v[s + 1] {
                            acc.push(f.value(b) + next[b]);
                        }
                    }
                    *slot = acc.value();
                }
            }
            let scale = (omega - 1.0) * lw - total;
            for s in 0..=n - 1 - m {
                for (w, slot) in words.iter().zip(freq.iter_mut()) {
                    if (0..=m).any(|j| pi.image(w[j]) != v[s + j]) {
                        continue;
                    }
                    let mut lp = inner[s][w[0]] + beta[s + m][w[m]] + scale;
                    for &c in &w[1..] {
                        lp += f.value(c);
                    }
                    if lp > f64::NEG_INFINITY {
                        *slot += lp.exp() / offsets;
                    }
                }
            }
            true
        },
    );
    Ok(words.into_iter().zip(freq).collect())
}

/// The Markov measure of order `max(m, 1)` induced by the weighted fiber
/// over `zeta` (of length `n`).
///
/// With `m = 0` the symbol frequencies are used, each row restricted to its
/// allowed successors. Only the communicating class of the frequency
/// support with the largest mass is kept: its rows are the normalized
/// frequencies restricted to the class, and every other row is uniform over
/// its allowed successors. On an irreducible X the kept class is then the
/// unique closed class, and transient boundary effects of the finite word
/// carry no stationary mass.
pub fn extremal_measure(
    t: &Tower,
    f: &Potential,
    omega: f64,
    zeta: &[usize],
    n: usize,
    m: usize,
) -> Result<MarkovMeasure> {
    if zeta.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "Z-word has length {} but n = {n}",
            zeta.len()
        )));
    }
    if n <= m {
        return Err(Error::OrderTooLarge { order: m, n });
    }
    let freq = extremal_block_frequencies(t, f, omega, zeta, m)?;
    let x = t.x();
    let order = m.max(1);
    let (blocks, recoding) = x.higher_block(order)?;
    let kb = blocks.len();
    let mut counts = vec![vec![0.0; kb]; kb];
    let mass: Vec<f64> = if m == 0 {
        let p: Vec<f64> = freq.iter().map(|(_, q)| *q).collect();
        for (r, row) in counts.iter_mut().enumerate() {
            for &c in blocks.successors(r) {
                row[c] = p[c];
            }
        }
        p
    } else {
        for (w, q) in &freq {
            let r = recoding.block_index(&w[..m]).expect("prefix is admissible");
            let c = recoding.block_index(&w[1..]).expect("suffix is admissible");
            counts[r][c] += q;
        }
        counts.iter().map(|r| r.iter().sum()).collect()
    };

    // keep the heaviest communicating class of the frequency support
    let support: Vec<Vec<usize>> = counts
        .iter()
        .enumerate()
        .map(|(r, row)| {
            if mass[r] > 0.0 {
                (0..kb).filter(|&j| row[j] > 0.0).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut keep: Vec<usize> = Vec::new();
    let mut best = 0.0;
    for class in communicating_classes(&support) {
        let r0 = class[0];
        if class.len() == 1 && !support[r0].contains(&r0) {
            continue;
        }
        let w: f64 = class.iter().map(|&r| mass[r]).sum();
        if w > best {
            best = w;
            keep = class;
        }
    }
    let mut inside = vec![false; kb];
    for &r in &keep {
        inside[r] = true;
    }
    let kernel: Vec<Vec<f64>> = (0..kb)
        .map(|r| {
            let mut row = vec![0.0; kb];
            if inside[r] {
                for &c in &support[r] {
                    if inside[c] {
                        row[c] = counts[r][c];
                    }
                }
            } else {
                for &c in blocks.successors(r) {
                    row[c] = 1.0;
                }
            }
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= s);
            row
        })
        .collect();
    MarkovMeasure::new(x, order, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{stationary, STATIONARY_TOL};
    use crate::symbolic::{SlidingBlockCode, Sft};

    #[test]
    fn product_zero_potential_is_uniform() {
        let t = Tower::product(&Sft::full(3).unwrap(), &Sft::full(2).unwrap()).unwrap();
        let f = Potential::zero(6);
        for &w in &[0.0, 0.5, 1.0] {
            let mu = extremal_measure(&t, &f, w, &[0; 5], 5, 0).unwrap();
            for row in mu.kernel() {
                for &x in row {
                    assert!((x - 1.0 / 6.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn golden_kernel_near_parry() {
        let g = Sft::golden_mean();
        let t = Tower::trivial(g.clone());
        let f = Potential::zero(2);
        let mu = extremal_measure(&t, &f, 1.0, &[0; 12], 12, 1).unwrap();
        let parry = MarkovMeasure::parry(&g, 1).unwrap();
        for (a, b) in mu.kernel().iter().zip(parry.kernel()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 0.05, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn frequencies_sum_to_one() {
        let a = Sft::full(2).unwrap();
        let b = Sft::golden_mean();
        let t = Tower::product(&a, &b).unwrap();
        let f = Potential::new(vec![0.2, -0.5, 0.9, 0.0]).unwrap();
        for m in 0..3 {
            let freq = extremal_block_frequencies(&t, &f, 0.4, &[0; 6], m).unwrap();
            let s: f64 = freq.iter().map(|(_, q)| q).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_point_fiber() {
        let c = Sft::cycle(vec!["a", "b"]).unwrap();
        let t = Tower::over_point(SlidingBlockCode::identity(c));
        let f = Potential::zero(2);
        let mu = extremal_measure(&t, &f, 0.5, &[0; 4], 4, 1).unwrap();
        assert_eq!(mu.kernel(), &[vec![0.0, 1.0], vec![1.0, 0.0]][..]);
    }

    #[test]
    fn invariants_hold() {
        let b = Sft::new(vec!["a", "b", "c"], &[(0, 0), (0, 1), (1, 2), (2, 0), (2, 2)]).unwrap();
        let t = Tower::product(&Sft::full(2).unwrap(), &b).unwrap();
        let f = Potential::new(vec![0.1, 0.4, -0.3, 0.7, 0.0, -1.0]).unwrap();
        for m in 1..3 {
            let mu = extremal_measure(&t, &f, 0.6, &[0; 7], 7, m).unwrap();
            assert_eq!(mu.order(), m);
            for row in mu.kernel() {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            assert!(mu.stationary_residual() < STATIONARY_TOL.max(1e-10));
            assert_eq!(stationary(mu.kernel()).unwrap(), mu.stationary());
        }
    }

    // Over p^n the X-words are a^i c^(n-i); c never returns to a, so the
    // frequency kernel leaks from the heavy a-loop into an absorbing c.
    #[test]
    fn boundary_leak_is_dropped() {
        let x = Sft::new(
            vec!["a", "b", "c"],
            &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)],
        )
        .unwrap();
        let y = Sft::full_named(vec!["p", "q"]).unwrap();
        let pi = SlidingBlockCode::new(x, y.clone(), vec![0, 1, 0]).unwrap();
        let t = Tower::new(pi, SlidingBlockCode::identity(y)).unwrap();
        let f = Potential::new(vec![1.0, 0.3, -0.6]).unwrap();
        let mu = extremal_measure(&t, &f, 1.0, &[0; 12], 12, 1).unwrap();
        assert_eq!(mu.kernel()[0], vec![1.0, 0.0, 0.0]);
        assert!((mu.stationary()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_too_large() {
        let t = Tower::trivial(Sft::full(2).unwrap());
        let f = Potential::zero(2);
        assert!(matches!(
            extremal_measure(&t, &f, 1.0, &[0; 2], 2, 2),
            Err(Error::OrderTooLarge { order: 2, n: 2 })
        ));
    }

    #[test]
    fn empty_fiber() {
        let pi = SlidingBlockCode::identity(Sft::point());
        let phi = SlidingBlockCode::new(Sft::point(), Sft::full(2).unwrap(), vec![0]).unwrap();
        let t = Tower::new(pi, phi).unwrap();
        let f = Potential::zero(1);
        assert!(matches!(
            extremal_measure(&t, &f, 1.0, &[0, 1, 1], 3, 1),
            Err(Error::EmptyFiber { .. })
        ));
    }
}
