//! Expected values checked against independent recomputations that do not
//! share code with the library paths under test.

use espo::engine::{blend, evaluate_portfolio, onepoint_at, Fitter};
use espo::oracle::{covariance_variance_check, grid_search};
use espo::{profit_distribution, Bounds, Config64, Genotype64, Portfolio64, ScenarioSet64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROWS: [[f64; 2]; 3] = [[0.10, -0.05], [0.00, 0.02], [-0.10, 0.04]];
const PROBS: [f64; 3] = [0.5, 0.3, 0.2];

fn toy() -> ScenarioSet64 {
    ScenarioSet64::new(
        ROWS.iter().map(|r| r.to_vec()).collect(),
        PROBS.to_vec(),
        vec!["A".into(), "B".into()],
    )
    .unwrap()
}

/// Plain loops, no compensation; the loss moments go through E[l^2] - E[l]^2.
fn naive_moments(profits: &[f64], probs: &[f64]) -> (f64, f64) {
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (x, p) in profits.iter().zip(probs) {
        let loss = -x;
        m1 += p * loss;
        m2 += p * loss * loss;
    }
    (-m1, m2 - m1 * m1)
}

#[test]
fn toy_distribution_against_hand_values() {
    let hand: Vec<f64> = ROWS.iter().map(|r| 0.5 * r[0] + 0.5 * r[1]).collect();
    let (mean, var) = naive_moments(&hand, &PROBS);
    assert!((mean - 0.0095).abs() < 1e-15);
    assert!((var - 0.00043225).abs() < 1e-15);

    let p = Portfolio64::new(vec![0.5, 0.5], &Bounds::default()).unwrap();
    let d = profit_distribution(&toy(), &p).unwrap();
    for (got, want) in d.profits().iter().zip(&hand) {
        assert!((got - want).abs() < 1e-15);
    }
    assert!((d.expected_profit() - mean).abs() < 1e-15);
    assert!((d.loss_variance() - var).abs() < 1e-15);
    assert!((covariance_variance_check(&toy(), &p).unwrap() - var).abs() < 1e-15);

    let s = d.summary(0.0);
    assert!((s.std_dev - 0.020791).abs() < 5e-7);
    assert!((s.shortfall_probability - 0.2).abs() < 1e-15);
}

/// Straightforward re-statement of the decode rule.
fn decode_oracle(g1: &[f64], g2: &[bool]) -> Vec<f64> {
    let selected: Vec<usize> = (0..g2.len()).filter(|&j| g2[j]).collect();
    let k = selected.len();
    let mut raw = vec![0.0; g2.len()];
    for (i, v) in g1.iter().enumerate() {
        raw[selected[i % k]] += v;
    }
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        return g2
            .iter()
            .map(|&b| if b { 1.0 / k as f64 } else { 0.0 })
            .collect();
    }
    raw.iter().map(|r| r / total).collect()
}

#[test]
fn decode_matches_reimplementation() {
    let g = Genotype64::new(vec![0.2, 0.4, 0.2, 0.2], vec![true, true]).unwrap();
    let w = g.decode(&Bounds::default()).unwrap();
    let want = decode_oracle(g.g1(), g.g2());
    assert!((want[0] - 0.4).abs() < 1e-15 && (want[1] - 0.6).abs() < 1e-15);
    for (a, b) in w.weights().iter().zip(&want) {
        assert!((a - b).abs() < 1e-15);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..500 {
        let a = rng.gen_range(1..12);
        let b = rng.gen_range(1..40);
        let g = Genotype64::random(a, b, &mut rng);
        let w = g.decode(&Bounds::default()).unwrap();
        for (x, y) in w.weights().iter().zip(decode_oracle(g.g1(), g.g2())) {
            assert!((x - y).abs() < 1e-12, "{g:?}");
        }
    }
}

#[test]
fn crossover_hand_traces() {
    let a = Genotype64::new(vec![1.0; 4], vec![true, false]).unwrap();
    let b = Genotype64::new(vec![0.0; 4], vec![false, true]).unwrap();
    let child = onepoint_at(&a, &b, 2, 1, Fitter::A).unwrap();
    assert_eq!(child.g1(), &[1.0, 1.0, 0.0, 0.0]);
    assert_eq!(child.g2(), &[true, true]);

    let a = Genotype64::new(vec![1.0, 0.0], vec![true, false]).unwrap();
    let b = Genotype64::new(vec![0.0, 1.0], vec![false, true]).unwrap();
    assert_eq!(blend(&a, &b, 0.5, Fitter::A).unwrap().g1(), &[0.5, 0.5]);
}

#[test]
fn penalty_example_through_the_fitness_path() {
    // Single asset; the two worst scenarios carry P(profit <= -0.02) = 0.15.
    let returns = [-0.03, -0.02, 0.01, 0.02, 0.02];
    let probs = [0.05, 0.10, 0.35, 0.25, 0.25];
    let set = ScenarioSet64::new(
        returns.iter().map(|&r| vec![r]).collect(),
        probs.to_vec(),
        vec!["X".into()],
    )
    .unwrap();
    let cfg = Config64 {
        mu: -1.0,
        delta: Some(-0.02),
        epsilon: 0.1,
        gamma: 10.0,
        probabilistic_constraint_enabled: true,
        ..Default::default()
    };
    let p = Portfolio64::new(vec![1.0], &Bounds::default()).unwrap();
    let e = evaluate_portfolio(&p, &set, &cfg).unwrap();
    let (_, f) = naive_moments(&returns, &probs);
    let want = f + f * (0.15 - 0.1) * 10.0;
    assert!((e.stats.shortfall_probability - 0.15).abs() < 1e-15);
    assert!((e.raw_variance - f).abs() < 1e-15);
    assert!((e.fitness - want).abs() < 1e-15);
}

/// Closed-form long-only two-asset minimum-variance weight on asset 0.
fn two_asset_min_variance(set: &ScenarioSet64) -> f64 {
    let p = set.probabilities();
    let x0 = set.asset_returns(0);
    let x1 = set.asset_returns(1);
    let m0: f64 = x0.iter().zip(p).map(|(x, p)| x * p).sum();
    let m1: f64 = x1.iter().zip(p).map(|(x, p)| x * p).sum();
    let mut v0 = 0.0;
    let mut v1 = 0.0;
    let mut c = 0.0;
    for k in 0..p.len() {
        v0 += p[k] * (x0[k] - m0).powi(2);
        v1 += p[k] * (x1[k] - m1).powi(2);
        c += p[k] * (x0[k] - m0) * (x1[k] - m1);
    }
    ((v1 - c) / (v0 + v1 - 2.0 * c)).clamp(0.0, 1.0)
}

#[test]
fn grid_agrees_with_two_asset_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| vec![rng.gen_range(-0.02..0.02), rng.gen_range(-0.06..0.06)])
            .collect();
        let set = ScenarioSet64::equiprobable(rows, vec!["LOW".into(), "HIGH".into()]).unwrap();
        let cfg = Config64 {
            mu: -1.0,
            ..Default::default()
        };
        let best = grid_search(&set, &cfg, 0.01).unwrap();
        let analytic = two_asset_min_variance(&set);
        assert!(
            (best.portfolio.weights()[0] - analytic).abs() <= 0.01 + 1e-12,
            "grid {:?} vs analytic {analytic}",
            best.portfolio.weights()
        );
        assert!(best.portfolio.weights()[0] >= analytic - 0.01);
    }
}
