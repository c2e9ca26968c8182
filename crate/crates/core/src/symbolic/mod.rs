//! Shifts of finite type, words, 1-block codes, towers and window-1 potentials.
//!
//! Everything downstream assumes 1-step SFTs, 1-block codes and potentials
//! depending on one coordinate. Longer memory is folded into the alphabet by
//! [`Sft::higher_block`].

mod code;
mod potential;
mod sft;
mod tower;

pub use code::{LevelCheck, SlidingBlockCode};
pub use potential::Potential;
pub use sft::{BlockRecoding, Sft, Word};
pub use tower::{Tower, TowerReport};


