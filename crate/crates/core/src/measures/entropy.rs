use super::markov::MarkovMeasure;
use crate::numeric::{check_distribution, neg_xlogx};
use crate::symbolic::Potential;
use crate::{Error, Result};

/// `H(p) = -Σ p_i log p_i`, with `0 log 0 = 0`.
pub fn partition_entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    Ok(p.iter().map(|&x| neg_xlogx(x)).sum::<f64>().max(0.0))
}

/// `H(B | A)` for a joint table whose rows index cells of `A`:
/// `H(joint) - H(row marginal)`.
pub fn conditional_partition_entropy(joint: &[Vec<f64>]) -> Result<f64> {
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    check_distribution(&flat)?;
    let rows: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let h_joint: f64 = flat.iter().map(|&x| neg_xlogx(x)).sum();
    let h_rows: f64 = rows.iter().map(|&x| neg_xlogx(x)).sum();
    Ok(h_joint - h_rows)
}

/// Entropy rate `-Σ_i π_i Σ_j K_ij log K_ij`.
pub fn entropy_markov(mu: &MarkovMeasure) -> f64 {
    mu.stationary()
        .iter()
        .zip(mu.kernel())
        .map(|(&p, row)| p * row.iter().map(|&k| neg_xlogx(k)).sum::<f64>())
        .sum::<f64>()
        .max(0.0)
}

/// `∫ f dμ` for a window-1 potential on the base shift.
pub fn integrate_potential(mu: &MarkovMeasure, f: &Potential) -> Result<f64> {
    if f.len() != mu.base().len() {
        return Err(Error::DimensionMismatch(
            "potential does not live on the measure's shift".into(),
        ));
    }
    Ok(mu
        .symbol_marginal()
        .iter()
        .enumerate()
        .map(|(s, &p)| p * f.value(s))
        .sum())
}
