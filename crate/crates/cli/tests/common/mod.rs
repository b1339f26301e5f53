#![allow(dead_code)]

use std::path::PathBuf;

use espo::{Config64, OperatorCounts, ScenarioSet64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Random small scenario set: per-asset drift and volatility with a shared
/// factor of random sign and strength.
pub fn random_instance(n_assets: usize, n_scenarios: usize, seed: u64) -> ScenarioSet64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drift: Vec<f64> = (0..n_assets).map(|_| rng.gen_range(-0.005..0.01)).collect();
    let vol: Vec<f64> = (0..n_assets).map(|_| rng.gen_range(0.01..0.05)).collect();
    let load: Vec<f64> = (0..n_assets).map(|_| rng.gen_range(-0.3..0.8)).collect();
    let rows = (0..n_scenarios)
        .map(|_| {
            let common: f64 = rng.sample(StandardNormal);
            (0..n_assets)
                .map(|j| {
                    let own: f64 = rng.sample(StandardNormal);
                    drift[j] + vol[j] * (load[j] * common + (1.0 - load[j] * load[j]).sqrt() * own)
                })
                .collect()
        })
        .collect();
    let labels = (0..n_assets).map(|j| format!("A{j}")).collect();
    ScenarioSet64::equiprobable(rows, labels).unwrap()
}

/// Small-instance search settings: initial population 200,
/// `o = (20, 100, 50, 30)`, at most 200 generations.
pub fn oracle_config(scenarios: &ScenarioSet64, seed: u64) -> Config64 {
    let lowest_mean = scenarios
        .asset_means()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Config64 {
        mu: lowest_mean - 0.01,
        b: ORACLE_BUCKETS_PER_ASSET * scenarios.n_assets(),
        operator_counts: OperatorCounts::new(20, 100, 50, 30),
        initial_population: 200,
        max_generations: 200,
        stagnation_patience: 0,
        seed,
        ..Default::default()
    }
}

/// Two buckets per asset; the DJIA setup uses roughly three (100 for 30).
pub const ORACLE_BUCKETS_PER_ASSET: usize = 2;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}
