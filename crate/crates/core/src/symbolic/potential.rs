use std::collections::HashMap;

use super::code::SlidingBlockCode;
use super::sft::{BlockRecoding, Sft};
use crate::{Error, Result};

/// A window-1 potential: one real value per symbol, in nats per step.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("potential value {v} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn zero(k: usize) -> Self {
        Self {
            values: vec![0.0; k],
        }
    }

    pub fn constant(k: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; k])
    }

    /// Values by symbol name; symbols not listed get 0.
    pub fn from_names(sft: &Sft, map: &HashMap<String, f64>) -> Result<Self> {
        let mut values = vec![0.0; sft.len()];
        for (name, &v) in map {
            // names of symbols removed by trimming are tolerated
            if let Some(i) = sft.index_of(name) {
                values[i] = v;
            }
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn value(&self, s: usize) -> f64 {
        self.values[s]
    }

    /// `max |f|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Birkhoff sum along a word. Because the potential depends on one
    /// coordinate only, this is also the supremum of `S_n f` on the cylinder.
    pub fn birkhoff_sum(&self, w: &[usize]) -> Result<f64> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        w.iter()
            .map(|&s| {
                self.values.get(s).copied().ok_or_else(|| Error::InadmissibleWord {
                    word: w.to_vec(),
                    reason: format!("symbol index {s} out of range"),
                })
            })
            .sum()
    }

    /// `f ∘ code` on the code's source.
    pub fn pull_back(&self, code: &SlidingBlockCode) -> Result<Self> {
        if code.target().len() != self.len() {
            return Err(Error::DimensionMismatch(
                "potential does not live on the code's target".into(),
            ));
        }
        Ok(Self {
            values: code.rule().iter().map(|&r| self.values[r]).collect(),
        })
    }

    /// Potential on a block presentation. For a power recoding each block
    /// carries the Birkhoff sum over its symbols; for a higher-block
    /// recoding each block carries the value of its first symbol.
    pub fn on_blocks(&self, rec: &BlockRecoding, power: bool) -> Self {
        let values = rec
            .blocks()
            .iter()
            .map(|b| {
                if power {
                    b.iter().map(|&s| self.values[s]).sum()
                } else {
                    self.values[b[0]]
                }
            })
            .collect();
        Self { values }
    }
}
