use super::code::{LevelCheck, SlidingBlockCode};
use super::potential::Potential;
use super::sft::Sft;
use crate::{Error, Result};

/// Two factor codes `X -> Y -> Z` and their composite.
#[derive(Debug, Clone, PartialEq)]
pub struct Tower {
    pi: SlidingBlockCode,
    phi: SlidingBlockCode,
    psi: SlidingBlockCode,
}

/// Per-code, per-length surjectivity results.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerReport {
    pub codes: Vec<(&'static str, Vec<LevelCheck>)>,
}

impl TowerReport {
    pub fn passes(&self) -> bool {
        self.codes.iter().all(|(_, l)| l.iter().all(|c| c.ok))
    }

    /// First failing (code name, level), if any.
    pub fn first_failure(&self) -> Option<(&'static str, &LevelCheck)> {
        self.codes
            .iter()
            .find_map(|(name, l)| l.iter().find(|c| !c.ok).map(|c| (*name, c)))
    }
}

impl Tower {
    pub fn new(pi: SlidingBlockCode, phi: SlidingBlockCode) -> Result<Self> {
        let psi = pi.then(&phi)?;
        Ok(Self { pi, phi, psi })
    }

    /// `X = A x B`, `Y = B`, `Z` a point, with the coordinate projection.
    pub fn product(a: &Sft, b: &Sft) -> Result<Self> {
        let pi = SlidingBlockCode::project_right(a, b)?;
        let phi = SlidingBlockCode::to_point(b.clone());
        Self::new(pi, phi)
    }

    /// `X = A x (B x C)`, `Y = B x C`, `Z = C`.
    pub fn three_level(a: &Sft, b: &Sft, c: &Sft) -> Result<Self> {
        let bc = b.product(c)?;
        let pi = SlidingBlockCode::project_right(a, &bc)?;
        let phi = SlidingBlockCode::project_right(b, c)?;
        // project_right(b, c) rebuilds b x c; the two must agree symbol for symbol
        if phi.source() != &bc {
            return Err(Error::Invalid("inconsistent product presentation".into()));
        }
        Self::new(pi, phi)
    }

    /// `Y = X` through the identity, `Z` a point.
    pub fn trivial(x: Sft) -> Self {
        let pi = SlidingBlockCode::identity(x.clone());
        let phi = SlidingBlockCode::to_point(x);
        Self::new(pi, phi).expect("identity then point composes")
    }

    /// `Z` a point over a given `pi`.
    pub fn over_point(pi: SlidingBlockCode) -> Self {
        let phi = SlidingBlockCode::to_point(pi.target().clone());
        Self::new(pi, phi).expect("any code composes with the point map")
    }

    pub fn x(&self) -> &Sft {
        self.pi.source()
    }

    pub fn y(&self) -> &Sft {
        self.pi.target()
    }

    pub fn z(&self) -> &Sft {
        self.phi.target()
    }

    pub fn pi(&self) -> &SlidingBlockCode {
        &self.pi
    }

    pub fn phi(&self) -> &SlidingBlockCode {
        &self.phi
    }

    pub fn psi(&self) -> &SlidingBlockCode {
        &self.psi
    }

    /// Word-level surjectivity of `pi`, `phi` and `psi` for lengths up to `horizon`.
    pub fn validate(&self, horizon: usize) -> TowerReport {
        TowerReport {
            codes: vec![
                ("pi", self.pi.surjectivity_levels(horizon)),
                ("phi", self.phi.surjectivity_levels(horizon)),
                ("psi", self.psi.surjectivity_levels(horizon)),
            ],
        }
    }

    /// The tower of k-th powers with the potential `S_k f` on k-blocks.
    pub fn power(&self, f: &Potential, k: usize) -> Result<(Tower, Potential)> {
        let (xk, rx) = self.x().power(k)?;
        let (yk, ry) = self.y().power(k)?;
        let (zk, rz) = self.z().power(k)?;
        let map = |code: &SlidingBlockCode,
                   from: &super::sft::BlockRecoding,
                   to: &super::sft::BlockRecoding| {
            from.blocks()
                .iter()
                .map(|b| {
                    let img: Vec<usize> = b.iter().map(|&s| code.image(s)).collect();
                    to.block_index(&img).ok_or_else(|| {
                        Error::Invalid("power code image is not an admissible block".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        };
        let pi = SlidingBlockCode::new(xk.clone(), yk.clone(), map(&self.pi, &rx, &ry)?)?;
        let phi = SlidingBlockCode::new(yk, zk, map(&self.phi, &ry, &rz)?)?;
        Ok((Tower::new(pi, phi)?, f.on_blocks(&rx, true)))
    }

    /// Prepends the product extension `E x X -> X` and returns the extended
    /// tower with `f` pulled back.
    pub fn extend_by_product(&self, e: &Sft, f: &Potential) -> Result<(Tower, Potential)> {
        let proj = SlidingBlockCode::project_right(e, self.x())?;
        let pulled = f.pull_back(&proj)?;
        let pi = proj.then(&self.pi)?;
        Ok((Tower::new(pi, self.phi.clone())?, pulled))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_tower_validates() {
        let t = Tower::product(&Sft::full(3).unwrap(), &Sft::full(2).unwrap()).unwrap();
        assert_eq!(t.x().len(), 6);
        assert!(t.validate(6).passes());
    }

    #[test]
    fn three_level_with_cycle() {
        let c = Sft::cycle(vec!["a", "b"]).unwrap();
        let t = Tower::three_level(&Sft::full(3).unwrap(), &Sft::full(2).unwrap(), &c).unwrap();
        assert_eq!(t.x().len(), 12);
        assert_eq!(t.z().len(), 2);
        assert!(t.validate(5).passes());
    }

    #[test]
    fn golden_recoded_projection_validates() {
        let g = Sft::golden_mean();
        let (g2, rec) = g.higher_block(2).unwrap();
        let rule = (0..g2.len()).map(|i| rec.first_symbol(i)).collect();
        let pi = SlidingBlockCode::new(g2, g, rule).unwrap();
        assert!(Tower::over_point(pi).validate(8).passes());
    }

    #[test]
    fn missing_symbol_fails_at_one() {
        let pi =
            SlidingBlockCode::new(Sft::full(2).unwrap(), Sft::full(3).unwrap(), vec![0, 1]).unwrap();
        let report = Tower::over_point(pi).validate(4);
        assert!(!report.passes());
        let (name, lvl) = report.first_failure().unwrap();
        assert_eq!((name, lvl.length), ("pi", 1));
    }

    #[test]
    fn mismatched_codes_rejected() {
        let pi = SlidingBlockCode::identity(Sft::golden_mean());
        let phi = SlidingBlockCode::identity(Sft::full(2).unwrap());
        assert!(Tower::new(pi, phi).is_err());
    }
}
