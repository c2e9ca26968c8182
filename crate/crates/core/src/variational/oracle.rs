use crate::numeric::{check_distribution, log_sum_exp, LogSumExp};
use crate::pressure::check_omega;
use crate::symbolic::Potential;
use crate::{Error, Result};

/// `log Σ_b (Σ_a e^{f(a,b)})^ω` for the tower `A × B -> B -> point` of full
/// shifts, with `table[a][b] = f(a, b)`.
pub fn closed_form_product_tower(table: &[Vec<f64>], omega: f64) -> Result<f64> {
    check_omega(omega)?;
    let na = table.len();
    let nb = table.first().map_or(0, Vec::len);
    if na == 0 || nb == 0 || table.iter().any(|r| r.len() != nb) {
        return Err(Error::DimensionMismatch("ragged or empty table".into()));
    }
    if table.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("potential values must be finite".into()));
    }
    let mut acc = LogSumExp::new();
    for b in 0..nb {
        let inner: Vec<f64> = (0..na).map(|a| table[a][b]).collect();
        acc.push(omega * log_sum_exp(&inner));
    }
    Ok(acc.value())
}

/// The table `f(a, b)` as a potential on `A × B`, indexed `a · |B| + b`.
pub fn product_potential(table: &[Vec<f64>]) -> Result<Potential> {
    let nb = table.first().map_or(0, Vec::len);
    if table.iter().any(|r| r.len() != nb) {
        return Err(Error::DimensionMismatch("ragged table".into()));
    }
    Potential::new(table.iter().flatten().copied().collect())
}

/// `log Σ e^{c_i} - Σ p_i (c_i - log p_i)`, nonnegative with equality iff
/// `p_i ∝ e^{c_i}`.
pub fn weighted_jensen_gap(p: &[f64], c: &[f64]) -> Result<f64> {
    if p.len() != c.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for {} values",
            p.len(),
            c.len()
        )));
    }
    check_distribution(p)?;
    let inside: f64 = p
        .iter()
        .zip(c)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &ci)| pi * (ci - pi.ln()))
        .sum();
    Ok(log_sum_exp(c) - inside)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_potential() {
        let t = vec![vec![0.0; 2]; 3];
        for &w in &[0.0, 0.3, 1.0] {
            let v = closed_form_product_tower(&t, w).unwrap();
            assert!((v - (w * 3f64.ln() + 2f64.ln())).abs() < 1e-14);
        }
    }

    #[test]
    fn full_weight_is_free_energy() {
        let t = vec![vec![0.1, -0.4], vec![0.7, 0.2], vec![-1.0, 0.5]];
        let flat: Vec<f64> = t.iter().flatten().copied().collect();
        let v = closed_form_product_tower(&t, 1.0).unwrap();
        assert!((v - log_sum_exp(&flat)).abs() < 1e-14);
    }

    #[test]
    fn diagonal_indicator_half_weight() {
        let t = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let v = closed_form_product_tower(&t, 0.5).unwrap();
        let direct = (2.0 * (1.0 + 1f64.exp()).sqrt()).ln();
        assert!((v - direct).abs() < 1e-14);
        assert!((v - 1.3498).abs() < 5e-5);
    }

    // Maximize ω H(A|B) + H(B) + ω E f over product-form Bernoulli measures
    // on a grid: p(b) and p(a|b) for |A| = |B| = 2.
    #[test]
    fn grid_search_agrees() {
        let t = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let omega = 0.5;
        let h = |x: f64| {
            let y = 1.0 - x;
            let a = if x > 0.0 { -x * x.ln() } else { 0.0 };
            let b = if y > 0.0 { -y * y.ln() } else { 0.0 };
            a + b
        };
        let steps = 200;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=steps {
            let pb = i as f64 / steps as f64;
            for j in 0..=steps {
                let q0 = j as f64 / steps as f64;
                for k in 0..=steps {
                    let q1 = k as f64 / steps as f64;
                    let cond = pb * h(q0) + (1.0 - pb) * h(q1);
                    let ef = pb * (q0 * t[0][0] + (1.0 - q0) * t[1][0])
                        + (1.0 - pb) * (q1 * t[0][1] + (1.0 - q1) * t[1][1]);
                    let v = omega * cond + h(pb) + omega * ef;
                    best = best.max(v);
                }
            }
        }
        let exact = closed_form_product_tower(&t, omega).unwrap();
        assert!(best <= exact + 1e-12);
        assert!(exact - best < 1e-3);
    }

    #[test]
    fn jensen_examples() {
        assert_eq!(weighted_jensen_gap(&[1.0], &[3.3]).unwrap(), 0.0);
        assert!(weighted_jensen_gap(&[0.25; 4], &[2.0; 4]).unwrap().abs() < 1e-14);
        let g = weighted_jensen_gap(&[1.0, 0.0], &[0.0, 5.0]).unwrap();
        assert!((g - (1.0 + 5f64.exp()).ln()).abs() < 1e-14);
        assert!((g - 5.0067).abs() < 5e-5);
        assert!(matches!(
            weighted_jensen_gap(&[0.7, 0.7], &[0.0, 0.0]),
            Err(Error::NotADistribution(_))
        ));
    }

    #[test]
    fn gibbs_distribution_closes_gap() {
        let c = [0.3, -1.2, 2.0, 0.0];
        let z = log_sum_exp(&c);
        let p: Vec<f64> = c.iter().map(|x| (x - z).exp()).collect();
        assert!(weighted_jensen_gap(&p, &c).unwrap().abs() < 1e-12);
    }
}
