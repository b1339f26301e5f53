//! Penalized fitness `f' = f + p` with `f` the loss variance.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::config::OptimizationConfig;
use crate::error::{Error, Result};
use crate::genotype::Genotype;
use crate::scalar::Scalar;
use crate::scenario::{profit_distribution, Portfolio, ScenarioSet, Summary};

/// Shortfall penalty `f * max(0, P - epsilon) * gamma`.
pub fn probability_penalty<T: Scalar>(variance: T, probability: T, epsilon: T, gamma: T) -> T {
    variance * (probability - epsilon).max(T::zero()) * gamma
}

/// Return-floor penalty `f * max(0, mu - E) * gamma_mu`.
pub fn return_floor_penalty<T: Scalar>(variance: T, mean: T, mu: T, gamma_mu: T) -> T {
    variance * (mu - mean).max(T::zero()) * gamma_mu
}

/// Scores of one portfolio under a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation<T> {
    /// Penalized objective `f'`.
    pub fitness: T,
    /// Loss variance `f`.
    pub raw_variance: T,
    pub penalty: T,
    /// Statistics at the configured reporting threshold.
    pub stats: Summary<T>,
}

impl<T: Scalar> Evaluation<T> {
    /// Fitness first, then raw variance.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        self.fitness
            .partial_cmp(&other.fitness)
            .unwrap_or(Ordering::Equal)
            .then(
                self.raw_variance
                    .partial_cmp(&other.raw_variance)
                    .unwrap_or(Ordering::Equal),
            )
    }
}

/// Scores a portfolio. Shared by the evolutionary search and the grid oracle.
pub fn evaluate_portfolio<T: Scalar>(
    portfolio: &Portfolio<T>,
    scenarios: &ScenarioSet<T>,
    cfg: &OptimizationConfig<T>,
) -> Result<Evaluation<T>> {
    let dist = profit_distribution(scenarios, portfolio)?;
    let variance = dist.loss_variance();
    let stats = dist.summary(cfg.reporting_delta());

    let mut penalty = return_floor_penalty(variance, stats.mean, cfg.mu, cfg.gamma_mu());
    if cfg.probabilistic_constraint_enabled {
        let delta = cfg
            .delta
            .ok_or_else(|| Error::config("delta", "required by the probabilistic constraint"))?;
        let probability = dist.shortfall_probability(delta);
        penalty = penalty + probability_penalty(variance, probability, cfg.epsilon, cfg.gamma);
    }
    Ok(Evaluation {
        fitness: variance + penalty,
        raw_variance: variance,
        penalty,
        stats,
    })
}

/// A decoded, scored chromosome.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual<T: Scalar> {
    pub genotype: Genotype<T>,
    pub portfolio: Portfolio<T>,
    pub evaluation: Evaluation<T>,
}

impl<T: Scalar> Individual<T> {
    pub fn fitness(&self) -> T {
        self.evaluation.fitness
    }

    pub fn raw_variance(&self) -> T {
        self.evaluation.raw_variance
    }

    pub fn penalty(&self) -> T {
        self.evaluation.penalty
    }

    pub fn stats(&self) -> &Summary<T> {
        &self.evaluation.stats
    }

    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        self.evaluation.rank_cmp(&other.evaluation)
    }
}

/// Decodes and scores a genotype.
pub fn fitness<T: Scalar>(
    genotype: &Genotype<T>,
    scenarios: &ScenarioSet<T>,
    cfg: &OptimizationConfig<T>,
) -> Result<Individual<T>> {
    if genotype.n_assets() != scenarios.n_assets() {
        return Err(Error::Dimension(format!(
            "genotype covers {} assets, scenario set has {}",
            genotype.n_assets(),
            scenarios.n_assets()
        )));
    }
    let portfolio = genotype.decode(&cfg.bounds)?;
    let evaluation = evaluate_portfolio(&portfolio, scenarios, cfg)?;
    debug_assert!(
        (evaluation.fitness - evaluation.raw_variance - evaluation.penalty).abs()
            <= T::of(1e-12).max(T::epsilon() * evaluation.fitness.abs() * T::of(4.0))
    );
    debug_assert!(evaluation.penalty >= T::zero());
    Ok(Individual {
        genotype: genotype.clone(),
        portfolio,
        evaluation,
    })
}

/// The `count` fittest individuals, ordered best first. Ties fall back to
/// raw variance, then to input order.
pub fn select_elite<T: Scalar>(
    population: &[Individual<T>],
    count: usize,
) -> Result<Vec<Individual<T>>> {
    if count > population.len() {
        return Err(Error::config(
            "operator_counts",
            format!(
                "elite count {count} exceeds population size {}",
                population.len()
            ),
        ));
    }
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&i, &j| population[i].rank_cmp(&population[j]));
    Ok(order[..count]
        .iter()
        .map(|&i| population[i].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Bounds;

    fn scenarios() -> ScenarioSet<f64> {
        ScenarioSet::new(
            vec![vec![0.10, -0.05], vec![0.00, 0.02], vec![-0.10, 0.04]],
            vec![0.5, 0.3, 0.2],
            vec!["A".into(), "B".into()],
        )
        .unwrap()
    }

    #[test]
    fn penalty_formula_example() {
        let p: f64 = probability_penalty(0.0004, 0.15, 0.1, 10.0);
        assert!((p - 0.0002).abs() < 1e-18);
        assert!((0.0004 + p - 0.0006).abs() < 1e-18);
        assert_eq!(probability_penalty(0.0004, 0.05, 0.1, 10.0), 0.0);
        assert_eq!(return_floor_penalty(0.0004, 0.01, 0.001, 10.0), 0.0);
    }

    #[test]
    fn feasible_portfolio_has_no_penalty() {
        let cfg = OptimizationConfig {
            mu: 0.0,
            delta: Some(-0.05),
            probabilistic_constraint_enabled: true,
            ..Default::default()
        };
        let p = Portfolio::new(vec![0.5, 0.5], &Bounds::default()).unwrap();
        let e = evaluate_portfolio(&p, &scenarios(), &cfg).unwrap();
        assert_eq!(e.penalty, 0.0);
        assert_eq!(e.fitness, e.raw_variance);
        assert!((e.raw_variance - 0.00043225).abs() < 1e-15);
    }

    #[test]
    fn violations_are_penalized() {
        // P(profit <= 0) = 0.2 at (0.5, 0.5); mean 0.0095 under mu = 0.02.
        let cfg = OptimizationConfig {
            mu: 0.02,
            delta: Some(0.0),
            epsilon: 0.1,
            gamma: 10.0,
            gamma_mu: Some(5.0),
            probabilistic_constraint_enabled: true,
            ..Default::default()
        };
        let p = Portfolio::new(vec![0.5, 0.5], &Bounds::default()).unwrap();
        let e = evaluate_portfolio(&p, &scenarios(), &cfg).unwrap();
        let f = 0.00043225;
        let expected = f * 0.1 * 10.0 + f * (0.02 - 0.0095) * 5.0;
        assert!((e.penalty - expected).abs() < 1e-15);
        assert!((e.stats.shortfall_probability - 0.2).abs() < 1e-15);
    }

    #[test]
    fn zero_variance_hides_violations() {
        let set = ScenarioSet::equiprobable(vec![vec![-0.5]], vec!["A".into()]).unwrap();
        let cfg = OptimizationConfig {
            mu: 1.0,
            delta: Some(0.0),
            probabilistic_constraint_enabled: true,
            ..Default::default()
        };
        let g = Genotype::new(vec![0.3], vec![true]).unwrap();
        let ind = fitness(&g, &set, &cfg).unwrap();
        assert_eq!(ind.fitness(), 0.0);
        assert_eq!(ind.stats().shortfall_probability, 1.0);
    }

    #[test]
    fn genotype_dimension_checked() {
        let g = Genotype::new(vec![0.3], vec![true, false, true]).unwrap();
        let err = fitness(&g, &scenarios(), &OptimizationConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    fn individual(fitness: f64, raw: f64, tag: f64) -> Individual<f64> {
        Individual {
            genotype: Genotype::new(vec![tag], vec![true]).unwrap(),
            portfolio: Portfolio::new(vec![1.0], &Bounds::default()).unwrap(),
            evaluation: Evaluation {
                fitness,
                raw_variance: raw,
                penalty: fitness - raw,
                stats: Summary {
                    mean: 0.0,
                    std_dev: raw.sqrt(),
                    shortfall_probability: 0.0,
                },
            },
        }
    }

    #[test]
    fn elite_selection_orders_and_breaks_ties() {
        let pop = vec![
            individual(3.0, 1.0, 0.0),
            individual(1.0, 1.0, 0.1),
            individual(2.0, 0.5, 0.2),
            individual(2.0, 0.4, 0.3),
            individual(1.0, 1.0, 0.4),
        ];
        let elite = select_elite(&pop, 3).unwrap();
        let tags: Vec<f64> = elite.iter().map(|i| i.genotype.g1()[0]).collect();
        assert_eq!(tags, vec![0.1, 0.4, 0.3]);
        assert!(select_elite(&pop, 0).unwrap().is_empty());
        assert!(matches!(select_elite(&pop, 6), Err(Error::Config { .. })));
    }

    #[test]
    fn all_equal_keeps_input_order() {
        let pop: Vec<_> = (0..10)
            .map(|i| individual(1.0, 1.0, i as f64 / 10.0))
            .collect();
        let elite = select_elite(&pop, 4).unwrap();
        let tags: Vec<f64> = elite.iter().map(|i| i.genotype.g1()[0]).collect();
        assert_eq!(tags, vec![0.0, 0.1, 0.2, 0.3]);
    }
}
