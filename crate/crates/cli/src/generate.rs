//! Seeded random towers.
//!
//! Tower `i` of a run with seed `s` is drawn from `ChaCha8Rng(s)` on stream
//! `i`, so it does not depend on how many towers are requested.

use ergopress::{Potential, SlidingBlockCode, Sft, Tower};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::GeneratorKind;
use crate::error::{CliError, CliResult};

pub const MAX_ATTEMPTS: usize = 100;

const X_NAMES: [&str; 4] = ["a", "b", "c", "d"];
const Y_NAMES: [&str; 4] = ["p", "q", "r", "s"];
const Z_NAMES: [&str; 4] = ["u", "v", "w", "x"];

pub fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn generate(kind: GeneratorKind, seed: u64, index: usize) -> CliResult<(Tower, Potential)> {
    let mut rng = rng_for(seed, index);
    for _ in 0..MAX_ATTEMPTS {
        let drawn = match kind {
            GeneratorKind::Random => random_tower(&mut rng),
            GeneratorKind::Product => product_tower(&mut rng),
        };
        if let Some(t) = drawn {
            let f = random_potential(&mut rng, t.x().len());
            return Ok((t, f));
        }
    }
    Err(CliError::Domain(format!(
        "generation failed: no valid tower after {MAX_ATTEMPTS} attempts (seed {seed}, index {index})"
    )))
}

fn random_potential(rng: &mut ChaCha8Rng, k: usize) -> Potential {
    Potential::new((0..k).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .expect("values are finite")
}

/// A random surjection `0..from -> 0..to`.
fn merging_map(rng: &mut ChaCha8Rng, from: usize, to: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..from).collect();
    order.shuffle(rng);
    let mut rule = vec![0; from];
    for (i, &s) in order.iter().enumerate() {
        rule[s] = if i < to { i } else { rng.gen_range(0..to) };
    }
    rule
}

/// The quotient of `source` onto `to` symbols by a random merging map, when
/// the induced 1-block code is onto.
fn quotient(
    rng: &mut ChaCha8Rng,
    source: &Sft,
    to: usize,
    names: &[&str],
) -> Option<SlidingBlockCode> {
    let k = source.len();
    let rule = merging_map(rng, k, to);
    let mut pairs: Vec<(usize, usize)> = source
        .transitions()
        .into_iter()
        .map(|(a, b)| (rule[a], rule[b]))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let target = Sft::new(names[..to].to_vec(), &pairs).ok()?;
    if target.len() != to {
        return None;
    }
    let code = SlidingBlockCode::new(source.clone(), target, rule).ok()?;
    code.is_surjective().then_some(code)
}

fn random_tower(rng: &mut ChaCha8Rng) -> Option<Tower> {
    let k = rng.gen_range(2..=4);
    let density: f64 = rng.gen_range(0.5..=1.0);
    let allowed: Vec<Vec<bool>> = (0..k)
        .map(|_| (0..k).map(|_| rng.gen_bool(density)).collect())
        .collect();
    let x = Sft::from_matrix(X_NAMES[..k].to_vec(), allowed).ok()?;
    if x.len() < 2 || !x.is_irreducible() {
        return None;
    }
    // Y merges at least two symbols and is nontrivial when X allows it; Z
    // may be a relabeling of Y
    let ky = if x.len() >= 3 { rng.gen_range(2..x.len()) } else { 1 };
    let pi = quotient(rng, &x, ky, &Y_NAMES)?;
    let kz = rng.gen_range(1..=ky);
    let phi = quotient(rng, pi.target(), kz, &Z_NAMES)?;
    Tower::new(pi, phi).ok()
}

fn product_tower(rng: &mut ChaCha8Rng) -> Option<Tower> {
    let a = Sft::full(rng.gen_range(2..=3)).ok()?;
    let b = Sft::full(rng.gen_range(1..=3)).ok()?;
    Tower::product(&a, &b).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn towers_are_valid_and_reproducible() {
        for i in 0..20 {
            let (t, f) = generate(GeneratorKind::Random, 7, i).unwrap();
            assert!((2..=4).contains(&t.x().len()));
            assert!(t.x().is_irreducible());
            assert!(t.pi().is_surjective() && t.phi().is_surjective());
            assert!(t.y().len() < t.x().len());
            assert!(f.values().iter().all(|v| (-1.0..=1.0).contains(v)));
            let (t2, f2) = generate(GeneratorKind::Random, 7, i).unwrap();
            assert_eq!(t.x(), t2.x());
            assert_eq!(t.pi().rule(), t2.pi().rule());
            assert_eq!(f, f2);
        }
    }

    #[test]
    fn product_generator() {
        let (t, _) = generate(GeneratorKind::Product, 1, 0).unwrap();
        assert!(t.x().is_full() && t.z().len() == 1);
    }

    #[test]
    fn merging_map_is_onto() {
        let mut rng = rng_for(3, 0);
        for _ in 0..50 {
            let r = merging_map(&mut rng, 4, 3);
            for t in 0..3 {
                assert!(r.contains(&t));
            }
        }
    }
}
