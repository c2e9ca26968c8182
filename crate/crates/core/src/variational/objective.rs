use crate::measures::{
    entropy_bracket_pushforward, entropy_markov, integrate_potential, EntropyBracket,
    MarkovMeasure,
};
use crate::pressure::check_omega;
use crate::symbolic::{Potential, Tower};
use crate::{Error, Result};

/// Pieces of the objective, kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveTerms {
    /// `h_μ(T | R)`.
    pub relative_x: EntropyBracket,
    /// `h_ν(S | R)` for `ν = π μ`.
    pub relative_y: EntropyBracket,
    /// `∫ f dμ`.
    pub integral: f64,
    pub omega: f64,
}

/// Interval value of `ω h_μ(T|R) + (1 - ω) h_ν(S|R) + ω ∫ f dμ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue {
    pub lower: f64,
    pub upper: f64,
    pub terms: ObjectiveTerms,
}

impl ObjectiveValue {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// The weighted objective of `mu` with entropy brackets at level `n >= 2`.
pub fn weighted_objective(
    t: &Tower,
    mu: &MarkovMeasure,
    f: &Potential,
    omega: f64,
    n: usize,
) -> Result<ObjectiveValue> {
    check_omega(omega)?;
    if mu.base() != t.x() {
        return Err(Error::DimensionMismatch(
            "measure does not live on the top shift".into(),
        ));
    }
    let integral = integrate_potential(mu, f)?;
    let h = EntropyBracket::exact(entropy_markov(mu), n);
    let nu = entropy_bracket_pushforward(mu, t.pi(), n)?;
    let kappa = if t.phi().is_identity() {
        nu
    } else {
        entropy_bracket_pushforward(mu, t.psi(), n)?
    };
    let relative_x = h.minus(&kappa);
    let relative_y = nu.minus(&kappa);
    let lower = omega * relative_x.lower + (1.0 - omega) * relative_y.lower + omega * integral;
    let upper = omega * relative_x.upper + (1.0 - omega) * relative_y.upper + omega * integral;
    Ok(ObjectiveValue {
        lower,
        upper: upper.max(lower),
        terms: ObjectiveTerms {
            relative_x,
            relative_y,
            integral,
            omega,
        },
    })
}
