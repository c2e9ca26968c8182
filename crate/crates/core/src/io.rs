//! JSON descriptions of shifts, towers and measures.
//!
//! A tower file looks like
//!
//! ```json
//! {
//!   "x": {"alphabet": ["a", "b", "c"], "transitions": [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2], [2, 0], [2, 1]]},
//!   "y": {"full": 2},
//!   "pi": {"rule": {"a": "0", "b": "1", "c": "1"}},
//!   "potential": {"a": 0.5}
//! }
//! ```
//!
//! `y` defaults to `x` with the identity code, `z` to the one-point shift.
//! Full shifts may be written `{"full": k}` and get symbols `"0".."k-1"`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::measures::MarkovMeasure;
use crate::symbolic::{Potential, SlidingBlockCode, Sft, Tower};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShiftSpec {
    Full {
        full: usize,
    },
    Explicit {
        alphabet: Vec<String>,
        transitions: Vec<[usize; 2]>,
    },
}

impl ShiftSpec {
    pub fn build(&self) -> Result<Sft> {
        match self {
            ShiftSpec::Full { full } => Sft::full(*full),
            ShiftSpec::Explicit {
                alphabet,
                transitions,
            } => {
                let pairs: Vec<(usize, usize)> = transitions.iter().map(|[a, b]| (*a, *b)).collect();
                Sft::new(alphabet.clone(), &pairs)
            }
        }
    }

    pub fn of(sft: &Sft) -> Self {
        ShiftSpec::Explicit {
            alphabet: sft.symbols().to_vec(),
            transitions: sft.transitions().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub rule: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

impl CodeSpec {
    pub fn build(&self, source: &Sft, target: &Sft) -> Result<SlidingBlockCode> {
        if let Some(w) = self.window {
            if w != 1 {
                return Err(Error::WideWindow(w));
            }
        }
        let map: HashMap<String, String> =
            self.rule.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        SlidingBlockCode::from_names(source.clone(), target.clone(), &map)
    }

    pub fn of(code: &SlidingBlockCode) -> Self {
        let (s, t) = (code.source(), code.target());
        let rule = (0..s.len())
            .map(|a| (s.symbol(a).to_string(), t.symbol(code.image(a)).to_string()))
            .collect();
        CodeSpec { rule, window: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub x: ShiftSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<ShiftSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<ShiftSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<CodeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<CodeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<BTreeMap<String, f64>>,
}

fn code_or_default(
    spec: Option<&CodeSpec>,
    source: &Sft,
    target: &Sft,
    name: &str,
) -> Result<SlidingBlockCode> {
    match spec {
        Some(c) => c.build(source, target),
        None if source == target => Ok(SlidingBlockCode::identity(source.clone())),
        None if target.len() == 1 => SlidingBlockCode::new(
            source.clone(),
            target.clone(),
            vec![0; source.len()],
        ),
        None => Err(Error::Invalid(format!("code {name} is missing"))),
    }
}

fn check_factor(code: &SlidingBlockCode, name: &str, horizon: usize) -> Result<()> {
    if code.is_surjective() {
        return Ok(());
    }
    let witness = code
        .surjectivity_levels(horizon)
        .into_iter()
        .find_map(|l| l.witness)
        .map(|w| code.target().format_word(&w))
        .unwrap_or_else(|| "beyond the checked horizon".into());
    Err(Error::Invalid(format!(
        "code {name} is not onto: no preimage for {witness}"
    )))
}

impl TowerSpec {
    /// Builds and validates the tower; the potential defaults to zero.
    pub fn build(&self) -> Result<(Tower, Potential)> {
        let x = self.x.build()?;
        let y = match &self.y {
            Some(s) => s.build()?,
            None => x.clone(),
        };
        let z = match &self.z {
            Some(s) => s.build()?,
            None => Sft::point(),
        };
        let pi = code_or_default(self.pi.as_ref(), &x, &y, "pi")?;
        let phi = code_or_default(self.phi.as_ref(), &y, &z, "phi")?;
        check_factor(&pi, "pi", 8)?;
        check_factor(&phi, "phi", 8)?;
        let f = match &self.potential {
            Some(map) => potential_from_map(&x, map)?,
            None => Potential::zero(x.len()),
        };
        let t = Tower::new(pi, phi)?;
        Ok((t, f))
    }

    pub fn of(t: &Tower, f: &Potential) -> Self {
        let x = t.x();
        TowerSpec {
            x: ShiftSpec::of(x),
            y: Some(ShiftSpec::of(t.y())),
            z: Some(ShiftSpec::of(t.z())),
            pi: Some(CodeSpec::of(t.pi())),
            phi: Some(CodeSpec::of(t.phi())),
            potential: Some(
                (0..x.len())
                    .map(|a| (x.symbol(a).to_string(), f.value(a)))
                    .collect(),
            ),
        }
    }
}

fn potential_from_map(x: &Sft, map: &BTreeMap<String, f64>) -> Result<Potential> {
    let map: HashMap<String, f64> = map.iter().map(|(k, v)| (k.clone(), *v)).collect();
    Potential::from_names(x, &map)
}

pub fn parse_tower(text: &str) -> Result<(Tower, Potential)> {
    let spec: TowerSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build()
}

pub fn tower_to_json(t: &Tower, f: &Potential) -> String {
    serde_json::to_string_pretty(&TowerSpec::of(t, f)).expect("tower specs serialize")
}

/// A potential file: either a bare `{"sym": value}` map or
/// `{"potential": {...}}`.
pub fn parse_potential(text: &str, x: &Sft) -> Result<Potential> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum PotentialFile {
        Wrapped { potential: BTreeMap<String, f64> },
        Bare(BTreeMap<String, f64>),
    }
    let file: PotentialFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let map = match file {
        PotentialFile::Wrapped { potential } | PotentialFile::Bare(potential) => potential,
    };
    if let Some(k) = map.keys().find(|k| x.index_of(k).is_none()) {
        return Err(Error::UnknownSymbol(k.clone()));
    }
    potential_from_map(x, &map)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default = "one")]
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub maxent: bool,
}

fn one() -> usize {
    1
}

impl MeasureSpec {
    pub fn build(&self, base: &Sft) -> Result<MarkovMeasure> {
        match (&self.kernel, self.maxent) {
            (Some(_), true) => Err(Error::Invalid(
                "give either a kernel or maxent, not both".into(),
            )),
            (Some(k), false) => MarkovMeasure::new(base, self.order, k.clone()),
            (None, true) => MarkovMeasure::parry(base, self.order),
            (None, false) => Err(Error::Invalid("measure needs a kernel or maxent".into())),
        }
    }

    pub fn of(mu: &MarkovMeasure) -> Self {
        MeasureSpec {
            order: mu.order(),
            kernel: Some(mu.kernel().to_vec()),
            maxent: false,
        }
    }
}

pub fn parse_measure(text: &str, base: &Sft) -> Result<MarkovMeasure> {
    let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_tower_defaults() {
        let (t, f) = parse_tower(r#"{"x":{"full":2}}"#).unwrap();
        assert_eq!(t.x(), &Sft::full(2).unwrap());
        assert!(t.pi().is_identity());
        assert!(t.phi().is_trivial_target());
        assert!(f.is_zero());
    }

    #[test]
    fn explicit_tower() {
        let text = r#"{
            "x": {"alphabet": ["a", "b", "c"], "transitions": [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2], [2, 0], [2, 1]]},
            "y": {"full": 2},
            "pi": {"rule": {"a": "0", "b": "1", "c": "1"}},
            "potential": {"a": 0.5}
        }"#;
        let (t, f) = parse_tower(text).unwrap();
        assert_eq!(t.x().len(), 3);
        assert_eq!(t.pi().rule(), &[0, 1, 1]);
        assert_eq!(f.values(), &[0.5, 0.0, 0.0]);
    }

    #[test]
    fn roundtrip() {
        let a = Sft::full(2).unwrap();
        let t = Tower::three_level(&a, &Sft::golden_mean(), &Sft::full(1).unwrap()).unwrap();
        let f = Potential::new((0..t.x().len()).map(|i| i as f64 * 0.25).collect()).unwrap();
        let (t2, f2) = parse_tower(&tower_to_json(&t, &f)).unwrap();
        assert_eq!(t2.x(), t.x());
        assert_eq!(t2.pi().rule(), t.pi().rule());
        assert_eq!(t2.phi().rule(), t.phi().rule());
        assert_eq!(f2, f);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_tower("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_tower(r#"{"x":{"full":2},"y":{"full":3},"pi":{"rule":{"0":"0","1":"1"}}}"#),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            parse_tower(r#"{"x":{"full":2},"y":{"full":2},"pi":{"rule":{"0":"0","1":"1"},"window":2}}"#),
            Err(Error::WideWindow(2))
        ));
        assert!(parse_tower(r#"{"x":{"full":3},"y":{"full":2}}"#).is_err());
    }

    #[test]
    fn potential_files() {
        let x = Sft::full(2).unwrap();
        assert_eq!(parse_potential(r#"{"1": 2.0}"#, &x).unwrap().values(), &[0.0, 2.0]);
        assert_eq!(
            parse_potential(r#"{"potential": {"0": -1}}"#, &x).unwrap().values(),
            &[-1.0, 0.0]
        );
        assert!(matches!(parse_potential(r#"{"q": 1}"#, &x), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn measures() {
        let g = Sft::golden_mean();
        let parry = parse_measure(r#"{"maxent": true}"#, &g).unwrap();
        assert_eq!(parry, MarkovMeasure::parry(&g, 1).unwrap());
        let mu = parse_measure(r#"{"order":1,"kernel":[[0.5,0.5],[1,0]]}"#, &g).unwrap();
        assert_eq!(mu.kernel()[1], vec![1.0, 0.0]);
        assert!(matches!(
            parse_measure(r#"{"order":1,"kernel":[[0.5,0.6],[1,0]]}"#, &g),
            Err(Error::NotADistribution(_))
        ));
        assert!(matches!(
            parse_measure(r#"{"order":1,"kernel":[[0.5,0.5],[0.5,0.5]]}"#, &g),
            Err(Error::NotADistribution(_))
        ));
        let back = parse_measure(&serde_json::to_string(&MeasureSpec::of(&mu)).unwrap(), &g).unwrap();
        assert_eq!(back, mu);
    }
}
