use std::collections::{HashMap, HashSet};

use super::sft::{Sft, Word};
use crate::{Error, Result};

/// A 1-block sliding block code between two SFTs.
///
/// Wider windows are not accepted; fold them into the source alphabet with
/// [`Sft::higher_block`] first.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingBlockCode {
    source: Sft,
    target: Sft,
    rule: Vec<usize>,
    preimages: Vec<Vec<usize>>,
}

/// Outcome of the word-level surjectivity check at one length.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCheck {
    pub length: usize,
    pub ok: bool,
    /// Lexicographically first target word without a preimage, if any.
    pub witness: Option<Word>,
}

impl SlidingBlockCode {
    pub fn new(source: Sft, target: Sft, rule: Vec<usize>) -> Result<Self> {
        if rule.len() != source.len() {
            return Err(Error::DimensionMismatch(format!(
                "rule has {} entries for {} source symbols",
                rule.len(),
                source.len()
            )));
        }
        if let Some(&bad) = rule.iter().find(|&&r| r >= target.len()) {
            return Err(Error::Invalid(format!("rule image {bad} out of range")));
        }
        for (a, b) in source.transitions() {
            if !target.is_allowed(rule[a], rule[b]) {
                return Err(Error::NotTransitionCompatible {
                    from: format!("{}{}", source.symbol(a), source.symbol(b)),
                    to: format!("{}{}", target.symbol(rule[a]), target.symbol(rule[b])),
                });
            }
        }
        let mut preimages = vec![Vec::new(); target.len()];
        for (a, &r) in rule.iter().enumerate() {
            preimages[r].push(a);
        }
        Ok(Self {
            source,
            target,
            rule,
            preimages,
        })
    }

    /// Builds a code from a window length and a rule on windows. Only
    /// `window == 1` is accepted.
    pub fn with_window(source: Sft, target: Sft, window: usize, rule: Vec<usize>) -> Result<Self> {
        if window != 1 {
            return Err(Error::WideWindow(window));
        }
        Self::new(source, target, rule)
    }

    /// Builds a code from a symbol-name map. Every surviving source symbol
    /// must appear; extra keys (symbols removed by trimming) are ignored.
    pub fn from_names(source: Sft, target: Sft, map: &HashMap<String, String>) -> Result<Self> {
        let rule = source
            .symbols()
            .iter()
            .map(|s| {
                let img = map
                    .get(s)
                    .ok_or_else(|| Error::Invalid(format!("rule has no image for {s:?}")))?;
                target
                    .index_of(img)
                    .ok_or_else(|| Error::UnknownSymbol(img.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, rule)
    }

    pub fn identity(sft: Sft) -> Self {
        let rule = (0..sft.len()).collect();
        Self::new(sft.clone(), sft, rule).expect("identity is compatible")
    }

    /// Maps everything to the one-point system.
    pub fn to_point(source: Sft) -> Self {
        let rule = vec![0; source.len()];
        Self::new(source, Sft::point(), rule).expect("point accepts everything")
    }

    /// Projection of a product `left x right` (as built by [`Sft::product`])
    /// onto its right factor.
    pub fn project_right(left: &Sft, right: &Sft) -> Result<Self> {
        let prod = left.product(right)?;
        let k2 = right.len();
        if prod.len() != left.len() * k2 {
            return Err(Error::Invalid("product lost symbols while trimming".into()));
        }
        let rule = (0..prod.len()).map(|i| i % k2).collect();
        Self::new(prod, right.clone(), rule)
    }

    /// Projection of a product `left x right` onto its left factor.
    pub fn project_left(left: &Sft, right: &Sft) -> Result<Self> {
        let prod = left.product(right)?;
        let k2 = right.len();
        if prod.len() != left.len() * k2 {
            return Err(Error::Invalid("product lost symbols while trimming".into()));
        }
        let rule = (0..prod.len()).map(|i| i / k2).collect();
        Self::new(prod, left.clone(), rule)
    }

    pub fn source(&self) -> &Sft {
        &self.source
    }

    pub fn target(&self) -> &Sft {
        &self.target
    }

    pub fn rule(&self) -> &[usize] {
        &self.rule
    }

    #[inline]
    pub fn image(&self, a: usize) -> usize {
        self.rule[a]
    }

    /// Source symbols mapping to target symbol `b`, ascending.
    #[inline]
    pub fn preimages(&self, b: usize) -> &[usize] {
        &self.preimages[b]
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.rule.iter().enumerate().all(|(i, &r)| i == r)
    }

    /// True when the target has a single symbol.
    pub fn is_trivial_target(&self) -> bool {
        self.target.len() == 1
    }

    /// Symbolwise image of an admissible source word.
    pub fn apply(&self, w: &[usize]) -> Result<Word> {
        self.source.check_word(w)?;
        Ok(Word(w.iter().map(|&s| self.rule[s]).collect()))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SlidingBlockCode) -> Result<SlidingBlockCode> {
        if self.target != other.source {
            return Err(Error::DimensionMismatch(
                "composition: target of the first code differs from source of the second".into(),
            ));
        }
        let rule = self.rule.iter().map(|&r| other.rule[r]).collect();
        Self::new(self.source.clone(), other.target.clone(), rule)
    }

    /// Word-level surjectivity for every length `1..=horizon`.
    ///
    /// Tracks, for each target word read so far, the set of source symbols
    /// that can end a preimage. Distinct (last symbol, set) states are kept
    /// once, with the lexicographically first word reaching them.
    pub fn surjectivity_levels(&self, horizon: usize) -> Vec<LevelCheck> {
        let mut out = Vec::with_capacity(horizon);
        let mut level: Vec<(usize, Vec<bool>, Word)> = Vec::new();
        for b in 0..self.target.len() {
            level.push((b, self.initial_set(b), Word(vec![b])));
        }
        for length in 1..=horizon {
            if length > 1 {
                level = self.advance(&level);
            }
            let witness = level
                .iter()
                .find(|(_, set, _)| !set.iter().any(|&x| x))
                .map(|(_, _, w)| w.clone());
            out.push(LevelCheck {
                length,
                ok: witness.is_none(),
                witness,
            });
        }
        out
    }

    /// Exact word-level surjectivity at every length, by running the subset
    /// construction to its fixed point.
    pub fn is_surjective(&self) -> bool {
        let mut seen: HashSet<(usize, Vec<bool>)> = HashSet::new();
        let mut frontier: Vec<(usize, Vec<bool>, Word)> = Vec::new();
        for b in 0..self.target.len() {
            let set = self.initial_set(b);
            if seen.insert((b, set.clone())) {
                frontier.push((b, set, Word::empty()));
            }
        }
        while !frontier.is_empty() {
            if frontier.iter().any(|(_, s, _)| !s.iter().any(|&x| x)) {
                return false;
            }
            let next = self.advance(&frontier);
            frontier = next
                .into_iter()
                .filter(|(b, s, _)| seen.insert((*b, s.clone())))
                .collect();
        }
        true
    }

    fn initial_set(&self, b: usize) -> Vec<bool> {
        let mut set = vec![false; self.source.len()];
        for &a in &self.preimages[b] {
            set[a] = true;
        }
        set
    }

    fn advance(&self, level: &[(usize, Vec<bool>, Word)]) -> Vec<(usize, Vec<bool>, Word)> {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (b, set, w) in level {
            if !set.iter().any(|&x| x) {
                continue;
            }
            for &b2 in self.target.successors(*b) {
                let mut s2 = vec![false; self.source.len()];
                for &t in &self.preimages[b2] {
                    s2[t] = self
                        .source
                        .predecessors(t)
                        .iter()
                        .any(|&s| set[s]);
                }
                if seen.insert((b2, s2.clone())) {
                    let mut w2 = w.clone();
                    w2.0.push(b2);
                    next.push((b2, s2, w2));
                }
            }
        }
        next
    }
}
