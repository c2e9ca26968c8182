//! Markov measures, partition entropies and hidden-Markov entropy brackets.

mod entropy;
mod hidden;
mod markov;

pub use entropy::{conditional_partition_entropy, entropy_markov, integrate_potential, partition_entropy};
pub use hidden::{
    entropy_bracket_pushforward, entropy_brackets_upto, pushforward_word_distribution,
    relative_entropy_bracket, EntropyBracket,
};
pub use markov::{closed_classes, communicating_classes, stationary, MarkovMeasure, ROW_SUM_TOL, STATIONARY_TOL};
