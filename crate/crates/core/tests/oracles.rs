use ergopress::measures::{entropy_markov, relative_entropy_bracket, MarkovMeasure};
use ergopress::pressure::{
    conditional_top_entropy_finite, fekete_bracket, orbit_average_weighted, pressure_finite,
    sup_weighted, sup_weighted_sequence,
};
use ergopress::variational::{
    closed_form_product_tower, optimize, product_potential, weighted_objective, OptimizerConfig,
};
use ergopress::{Potential, Sft, SlidingBlockCode, Tower};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXACT: f64 = 1e-9;
const MEASURE: f64 = 1e-3;

fn log_phi() -> f64 {
    ((1.0 + 5f64.sqrt()) / 2.0).ln()
}

fn config() -> OptimizerConfig {
    OptimizerConfig {
        restarts: 2,
        ..OptimizerConfig::default()
    }
}

fn product_3_2() -> Tower {
    Tower::product(&Sft::full(3).unwrap(), &Sft::full(2).unwrap()).unwrap()
}

fn table() -> Vec<Vec<f64>> {
    vec![vec![0.5, -0.3], vec![-1.0, 0.8], vec![0.2, 0.0]]
}

#[test]
fn product_counting() {
    let t = product_3_2();
    let f = Potential::zero(6);
    for &omega in &[0.0, 0.25, 0.5, 1.0] {
        let expect = omega * 3f64.ln() + 2f64.ln();
        for n in 1..=10 {
            let (v, _) = sup_weighted(&t, &f, omega, n).unwrap();
            assert!((v / n as f64 - expect).abs() < EXACT, "ω={omega} n={n}");
        }
        let r = optimize(&t, &f, omega, &config()).unwrap();
        assert!((r.best_value.lower - expect).abs() < MEASURE, "ω={omega}");
    }
}

#[test]
fn product_potential_closed_form() {
    let t = product_3_2();
    let table = table();
    let f = product_potential(&table).unwrap();
    let expect = closed_form_product_tower(&table, 0.5).unwrap();
    for n in 1..=8 {
        let (v, _) = sup_weighted(&t, &f, 0.5, n).unwrap();
        assert!((v / n as f64 - expect).abs() < EXACT, "n={n}");
    }
    let r = optimize(&t, &f, 0.5, &config()).unwrap();
    assert!((r.best_value.lower - expect).abs() < MEASURE);
    assert!(r.best_value.lower <= expect + EXACT);
}

#[test]
fn three_level_orbit_average() {
    let a = Sft::full(2).unwrap();
    let b = Sft::full(2).unwrap();
    for (c, base) in [
        (Sft::point(), vec![0]),
        (Sft::cycle(vec!["c0", "c1"]).unwrap(), vec![0, 1]),
    ] {
        let t = Tower::three_level(&a, &b, &c).unwrap();
        let f = Potential::zero(t.x().len());
        for &omega in &[0.0, 0.5, 1.0] {
            let expect = (omega + 1.0) * 2f64.ln();
            for n in 1..=8 {
                let v = orbit_average_weighted(&t, &f, omega, &base, n).unwrap();
                assert!((v / n as f64 - expect).abs() < EXACT, "ω={omega} n={n}");
            }
            let r = optimize(&t, &f, omega, &config()).unwrap();
            assert!((r.best_value.lower - expect).abs() < MEASURE, "ω={omega}");
        }
    }
}

#[test]
fn golden_towers_bracket_log_phi() {
    let g = Sft::golden_mean();
    let towers = [
        Tower::trivial(g.clone()),
        Tower::over_point(SlidingBlockCode::to_point(g.clone())),
    ];
    for t in &towers {
        let f = Potential::zero(2);
        let seq: Vec<f64> = sup_weighted_sequence(t, &f, 1.0, 16)
            .unwrap()
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        let upper = fekete_bracket(&seq).upper;
        let lower = optimize(t, &f, 1.0, &config()).unwrap().best_value.lower;
        assert!(upper - lower <= 0.03 && upper - lower >= -EXACT);
        for v in [upper, lower] {
            assert!((0.45..=0.52).contains(&v), "{v}");
        }
        assert!(lower <= log_phi() + EXACT && upper >= log_phi() - EXACT);
    }
}

#[test]
fn golden_pressure_decreases_to_log_phi() {
    let g = Sft::golden_mean();
    let f = Potential::zero(2);
    let values: Vec<f64> = (1..=16).map(|n| pressure_finite(&g, &f, n).unwrap()).collect();
    let mut best = f64::INFINITY;
    for (i, v) in values.iter().enumerate() {
        let r = v / (i + 1) as f64;
        assert!(r >= log_phi() - EXACT);
        best = best.min(r);
    }
    assert!((fekete_bracket(&values).upper - best).abs() < 1e-15);
    assert!(best - log_phi() < 0.03);
}

#[test]
fn conditional_entropy_of_product_projection() {
    let a = Sft::full(3).unwrap();
    let b = Sft::golden_mean();
    let code = SlidingBlockCode::project_right(&a, &b).unwrap();
    for n in 1..=6 {
        let v = conditional_top_entropy_finite(&code, n).unwrap();
        assert!((v / n as f64 - 3f64.ln()).abs() < EXACT, "n={n}");
    }
    let x = code.source().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = vec![MarkovMeasure::parry(&x, 1).unwrap()];
    for _ in 0..3 {
        tested.push(MarkovMeasure::random(&x, 1, &mut rng).unwrap());
    }
    let best = tested
        .iter()
        .map(|mu| relative_entropy_bracket(mu, &[&code], 10).unwrap().lower)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(best <= 3f64.ln() + EXACT);
    assert!((best - 3f64.ln()).abs() < MEASURE, "{best}");
}

#[test]
fn uniform_measure_objective_is_exact() {
    let t = product_3_2();
    let mu = MarkovMeasure::parry(t.x(), 1).unwrap();
    assert!((entropy_markov(&mu) - 6f64.ln()).abs() < 1e-12);
    for &omega in &[0.0, 0.5, 1.0] {
        let v = weighted_objective(&t, &mu, &Potential::zero(6), omega, 4).unwrap();
        let expect = omega * 3f64.ln() + 2f64.ln();
        assert!((v.lower - expect).abs() < 1e-12);
        assert!(v.width() < 1e-12);
    }
}
