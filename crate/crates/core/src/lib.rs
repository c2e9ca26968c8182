//! Relative weighted topological pressure on towers of one-sided shifts of
//! finite type, with the matching measure-side variational objective.
//!
//! A tower is a pair of 1-block factor codes `X -> Y -> Z`. The topological
//! side ([`pressure`]) computes ω-weighted fiber sums over Z-words at finite
//! level `n`; the measure side ([`measures`], [`variational`]) evaluates
//!
//! ```text
//! ω h_μ(T|R) + (1 - ω) h_{πμ}(S|R) + ω ∫ f dμ
//! ```
//!
//! over Markov measures on `X`, with hidden-Markov entropies carried as
//! certified brackets.

pub mod error;
pub mod io;
pub mod measures;
pub mod numeric;
pub mod pressure;
pub mod symbolic;
pub mod variational;

pub use error::{Error, Result};
pub use symbolic::{BlockRecoding, Potential, SlidingBlockCode, Sft, Tower, Word};
