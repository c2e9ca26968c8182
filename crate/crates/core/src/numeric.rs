//! Log-domain accumulation and entropy helpers.
//!
//! Every sum of exponentials in the crate goes through [`LogSumExp`], which
//! accumulates in caller order. Two computations that feed the same terms in
//! the same order produce bit-identical results.

/// `log(sum(exp(values)))`, stable; empty input gives `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let mut acc = LogSumExp::new();
    for &v in values {
        acc.push(v);
    }
    acc.value()
}

/// Streaming log-sum-exp with a running maximum.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    #[inline]
    pub fn push(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v <= self.max {
            self.scaled += (v - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// `-p log p` with the `0 log 0 = 0` convention.
#[inline]
pub fn neg_xlogx(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Tolerance used when deciding whether a vector sums to one.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

pub(crate) fn check_distribution(p: &[f64]) -> crate::Result<()> {
    if p.is_empty() {
        return Err(crate::Error::NotADistribution("empty vector".into()));
    }
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < -1e-15) {
        return Err(crate::Error::NotADistribution(format!("entry {bad}")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(crate::Error::NotADistribution(format!("sums to {s}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_naive() {
        let v: [f64; 4] = [0.1, -2.0, 3.5, 0.0];
        let naive: f64 = v.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&v) - naive).abs() < 1e-14);
    }

    #[test]
    fn lse_handles_large_and_empty() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        let v = [1000.0, 1000.0];
        assert!((log_sum_exp(&v) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
    }

    #[test]
    fn zero_log_zero() {
        assert_eq!(neg_xlogx(0.0), 0.0);
    }
}
