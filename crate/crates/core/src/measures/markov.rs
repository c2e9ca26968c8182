use rand::Rng;

use crate::symbolic::{BlockRecoding, Sft};
use crate::{Error, Result};

/// Row sums of a kernel must be within this of one.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Residual accepted for `π K = π`.
pub const STATIONARY_TOL: f64 = 1e-12;

/// A shift-invariant Markov measure of order `m` on `X`, stored as a
/// 1-step chain on the m-block presentation of `X`.
///
/// The symbol of `X` at time `t` is the first symbol of the block at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    order: usize,
    base: Sft,
    blocks: Sft,
    recoding: BlockRecoding,
    kernel: Vec<Vec<f64>>,
    stationary: Vec<f64>,
}

impl MarkovMeasure {
    /// Validates `kernel` (rows in lexicographic block order) and computes
    /// its stationary vector. Row sums within `1e-9` of one are
    /// renormalized.
    pub fn new(base: &Sft, order: usize, mut kernel: Vec<Vec<f64>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("Markov order must be positive".into()));
        }
        let (blocks, recoding) = base.higher_block(order)?;
        let k = blocks.len();
        if kernel.len() != k || kernel.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch(format!(
                "kernel must be {k}x{k} for order {order}"
            )));
        }
        for (i, row) in kernel.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if !x.is_finite() || *x < 0.0 {
                    return Err(Error::NotADistribution(format!("kernel[{i}][{j}] = {x}")));
                }
                if *x > 0.0 && !blocks.is_allowed(i, j) {
                    return Err(Error::NotADistribution(format!(
                        "kernel[{i}][{j}] = {x} on a forbidden transition"
                    )));
                }
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::NotADistribution(format!("row {i} sums to {s}")));
            }
            row.iter_mut().for_each(|x| *x /= s);
        }
        let stationary = stationary(&kernel)?;
        Ok(Self {
            order,
            base: base.clone(),
            blocks,
            recoding,
            kernel,
            stationary,
        })
    }

    /// The maximal-entropy (Parry) measure of the m-block presentation.
    pub fn parry(base: &Sft, order: usize) -> Result<Self> {
        let (blocks, _) = base.higher_block(order.max(1))?;
        if !blocks.is_irreducible() {
            return Err(Error::Reducible {
                classes: closed_classes(&support_of_sft(&blocks)).len(),
            });
        }
        let k = blocks.len();
        let (lambda, right) = perron(&blocks);
        let kernel = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if blocks.is_allowed(i, j) {
                            right[j] / (lambda * right[i])
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(base, order.max(1), kernel)
    }

    /// Random kernel on the allowed transitions, each row drawn uniformly
    /// from its simplex.
    pub fn random<R: Rng>(base: &Sft, order: usize, rng: &mut R) -> Result<Self> {
        let (blocks, _) = base.higher_block(order)?;
        let k = blocks.len();
        let kernel = (0..k)
            .map(|i| {
                let mut row = vec![0.0; k];
                for &j in blocks.successors(i) {
                    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
                    row[j] = -u.ln();
                }
                let s: f64 = row.iter().sum();
                row.iter_mut().for_each(|x| *x /= s);
                row
            })
            .collect();
        Self::new(base, order, kernel)
    }

    /// Bernoulli measure with symbol distribution `p` on a full shift.
    pub fn bernoulli(base: &Sft, p: &[f64]) -> Result<Self> {
        if !base.is_full() {
            return Err(Error::Invalid("Bernoulli measures need a full shift".into()));
        }
        if p.len() != base.len() {
            return Err(Error::DimensionMismatch("distribution length".into()));
        }
        crate::numeric::check_distribution(p)?;
        Self::new(base, 1, vec![p.to_vec(); base.len()])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    /// The m-block graph carrying the chain.
    pub fn blocks(&self) -> &Sft {
        &self.blocks
    }

    pub fn recoding(&self) -> &BlockRecoding {
        &self.recoding
    }

    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// One-symbol marginal on `X`.
    pub fn symbol_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.base.len()];
        for (b, &p) in self.stationary.iter().enumerate() {
            out[self.recoding.first_symbol(b)] += p;
        }
        out
    }

    /// `max_j |(π K)_j - π_j|`.
    pub fn stationary_residual(&self) -> f64 {
        residual(&self.kernel, &self.stationary)
    }
}

fn support_of(kernel: &[Vec<f64>]) -> Vec<Vec<usize>> {
    kernel
        .iter()
        .map(|r| (0..r.len()).filter(|&j| r[j] > 0.0).collect())
        .collect()
}

fn support_of_sft(s: &Sft) -> Vec<Vec<usize>> {
    (0..s.len()).map(|i| s.successors(i).to_vec()).collect()
}

fn reachability(succ: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let k = succ.len();
    (0..k)
        .map(|s| {
            let mut seen = vec![false; k];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                for &b in &succ[a] {
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            seen
        })
        .collect()
}

fn classes_with(succ: &[Vec<usize>], reach: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let k = succ.len();
    let mut assigned = vec![false; k];
    let mut out = Vec::new();
    for i in 0..k {
        if assigned[i] {
            continue;
        }
        let class: Vec<usize> = (0..k).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &class {
            assigned[j] = true;
        }
        out.push(class);
    }
    out
}

/// Communicating classes (strongly connected components) of a directed
/// graph given by successor lists, ordered by smallest member.
pub fn communicating_classes(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    classes_with(succ, &reachability(succ))
}

/// Closed communicating classes of a directed graph given by successor lists.
pub fn closed_classes(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let k = succ.len();
    let reach = reachability(succ);
    classes_with(succ, &reach)
        .into_iter()
        .filter(|class| {
            class
                .iter()
                .all(|&a| (0..k).all(|b| !reach[a][b] || class.contains(&b)))
        })
        .collect()
}

fn residual(kernel: &[Vec<f64>], p: &[f64]) -> f64 {
    let k = p.len();
    (0..k)
        .map(|j| {
            let s: f64 = (0..k).map(|i| p[i] * kernel[i][j]).sum();
            (s - p[j]).abs()
        })
        .fold(0.0, f64::max)
}

/// The unique stationary vector of a row-stochastic kernel whose support
/// has exactly one closed class (transient states get mass zero).
///
/// A direct solve on the closed class gives the starting point; lazy power
/// iteration `p ← p (I + K) / 2` then runs until the residual is below
/// `1e-12`.
pub fn stationary(kernel: &[Vec<f64>]) -> Result<Vec<f64>> {
    let k = kernel.len();
    if k == 0 || kernel.iter().any(|r| r.len() != k) {
        return Err(Error::DimensionMismatch("kernel must be square and nonempty".into()));
    }
    for (i, r) in kernel.iter().enumerate() {
        let s: f64 = r.iter().sum();
        if (s - 1.0).abs() > 1e-9 || r.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(Error::NotADistribution(format!("kernel row {i} sums to {s}")));
        }
    }
    let classes = closed_classes(&support_of(kernel));
    if classes.len() != 1 {
        return Err(Error::Reducible {
            classes: classes.len(),
        });
    }
    let class = &classes[0];
    let mut p = vec![0.0; k];
    if let Some(sol) = solve_on_class(kernel, class) {
        for (&i, v) in class.iter().zip(sol) {
            p[i] = v.max(0.0);
        }
    } else {
        for &i in class {
            p[i] = 1.0 / class.len() as f64;
        }
    }
    normalize(&mut p);
    let mut iters = 0;
    while residual(kernel, &p) >= STATIONARY_TOL && iters < 1_000_000 {
        let mut next = vec![0.0; k];
        for i in 0..k {
            if p[i] == 0.0 {
                continue;
            }
            for j in 0..k {
                next[j] += p[i] * kernel[i][j];
            }
        }
        for j in 0..k {
            p[j] = 0.5 * (p[j] + next[j]);
        }
        normalize(&mut p);
        iters += 1;
    }
    Ok(p)
}

fn normalize(p: &mut [f64]) {
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
}

/// Solves `p (K - I) = 0`, `Σ p = 1` restricted to `class` by Gaussian
/// elimination with partial pivoting.
fn solve_on_class(kernel: &[Vec<f64>], class: &[usize]) -> Option<Vec<f64>> {
    let c = class.len();
    // rows: equations j (columns of K), unknowns p_i
    let mut a: Vec<Vec<f64>> = (0..c)
        .map(|jj| {
            let j = class[jj];
            let mut row: Vec<f64> = class.iter().map(|&i| kernel[i][j]).collect();
            row[jj] -= 1.0;
            row.push(0.0);
            row
        })
        .collect();
    // replace the last equation by normalization
    a[c - 1] = vec![1.0; c + 1];
    for col in 0..c {
        let piv = (col..c).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..c {
            if r != col {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    for cc in col..=c {
                        a[r][cc] -= factor * a[col][cc];
                    }
                }
            }
        }
    }
    Some((0..c).map(|i| a[i][c] / a[i][i]).collect())
}

/// Perron eigenvalue and right eigenvector of an irreducible 0-1 matrix,
/// by power iteration on `A + I`.
pub(crate) fn perron(s: &Sft) -> (f64, Vec<f64>) {
    let k = s.len();
    let mut r = vec![1.0 / k as f64; k];
    let mut lambda = 0.0;
    for _ in 0..200_000 {
        let mut next: Vec<f64> = (0..k)
            .map(|i| r[i] + s.successors(i).iter().map(|&j| r[j]).sum::<f64>())
            .collect();
        let norm: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= norm);
        let diff = next
            .iter()
            .zip(&r)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        r = next;
        lambda = norm - 1.0;
        if diff < 1e-16 {
            break;
        }
    }
    // Rayleigh-style estimate from the converged vector
    let num: f64 = (0..k)
        .map(|i| s.successors(i).iter().map(|&j| r[j]).sum::<f64>())
        .sum();
    let den: f64 = r.iter().sum();
    if den > 0.0 {
        lambda = num / den;
    }
    (lambda, r)
}
