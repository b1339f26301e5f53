use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::Bounds;

/// Operator counts `o = (o1, o2, o3, o4)`: elites, crossover children,
/// mutants and fresh random chromosomes per follow-up generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 4]", into = "[usize; 4]")]
pub struct OperatorCounts {
    pub elite: usize,
    pub crossover: usize,
    pub mutation: usize,
    pub random: usize,
}

impl OperatorCounts {
    pub const fn new(elite: usize, crossover: usize, mutation: usize, random: usize) -> Self {
        Self {
            elite,
            crossover,
            mutation,
            random,
        }
    }

    /// Size of every generation after the initial one.
    pub fn follow_up_size(&self) -> usize {
        self.elite + self.crossover + self.mutation + self.random
    }

    /// Split of the crossover budget into (1-point, intermediate); an odd
    /// remainder goes to 1-point.
    pub fn crossover_split(&self) -> (usize, usize) {
        let intermediate = self.crossover / 2;
        (self.crossover - intermediate, intermediate)
    }
}

impl From<[usize; 4]> for OperatorCounts {
    fn from([elite, crossover, mutation, random]: [usize; 4]) -> Self {
        Self::new(elite, crossover, mutation, random)
    }
}

impl From<OperatorCounts> for [usize; 4] {
    fn from(o: OperatorCounts) -> Self {
        [o.elite, o.crossover, o.mutation, o.random]
    }
}

/// Every knob of one optimization run. Missing JSON keys fall back to
/// [`Default`], which is the 30-asset DJIA protocol (`b = 100`,
/// `o = (100, 420, 210, 100)`, initial population 1000, `mu = 0.001`,
/// `epsilon = 0.1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", default, deny_unknown_fields)]
pub struct OptimizationConfig<T: Scalar> {
    /// Floor on the expected profit.
    pub mu: T,
    /// Shortfall threshold; required when the probabilistic constraint is on.
    pub delta: Option<T>,
    /// Cap on `P(profit <= delta)`.
    pub epsilon: T,
    /// Penalty factor for the probabilistic constraint.
    pub gamma: T,
    /// Penalty factor for the return floor; defaults to `gamma`.
    pub gamma_mu: Option<T>,
    pub bounds: Bounds<T>,
    /// Number of budget buckets in `g1`.
    pub b: usize,
    pub operator_counts: OperatorCounts,
    pub initial_population: usize,
    pub max_generations: usize,
    /// Stop after this many generations without improvement; 0 disables.
    pub stagnation_patience: usize,
    pub seed: u64,
    pub probabilistic_constraint_enabled: bool,
    /// Per-bucket reset probability; defaults to `1/b`.
    pub mutation_rate_g1: Option<T>,
    /// Per-bit flip probability; defaults to `1/a`.
    pub mutation_rate_g2: Option<T>,
}

impl<T: Scalar> Default for OptimizationConfig<T> {
    fn default() -> Self {
        Self {
            mu: T::of(0.001),
            delta: None,
            epsilon: T::of(0.1),
            gamma: T::of(100.0),
            gamma_mu: None,
            bounds: Bounds::default(),
            b: 100,
            operator_counts: OperatorCounts::new(100, 420, 210, 100),
            initial_population: 1000,
            max_generations: 500,
            stagnation_patience: 50,
            seed: 0,
            probabilistic_constraint_enabled: false,
            mutation_rate_g1: None,
            mutation_rate_g2: None,
        }
    }
}

impl<T: Scalar> OptimizationConfig<T> {
    pub fn gamma_mu(&self) -> T {
        self.gamma_mu.unwrap_or(self.gamma)
    }

    /// Threshold used for reported shortfall statistics. Falls back to 0
    /// (probability of a non-positive profit) when no `delta` is configured.
    pub fn reporting_delta(&self) -> T {
        self.delta.unwrap_or_else(T::zero)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::config("mu", "must be finite"));
        }
        match self.delta {
            Some(d) if !d.is_finite() => return Err(Error::config("delta", "must be finite")),
            None if self.probabilistic_constraint_enabled => {
                return Err(Error::config(
                    "delta",
                    "required when probabilistic_constraint_enabled is true",
                ))
            }
            _ => {}
        }
        if !(self.epsilon >= T::zero() && self.epsilon <= T::one()) {
            return Err(Error::config("epsilon", "must lie in [0, 1]"));
        }
        if !(self.gamma.is_finite() && self.gamma > T::zero()) {
            return Err(Error::config("gamma", "must be positive"));
        }
        if !(self.gamma_mu().is_finite() && self.gamma_mu() > T::zero()) {
            return Err(Error::config("gamma_mu", "must be positive"));
        }
        if self.b == 0 {
            return Err(Error::config("b", "need at least one bucket"));
        }
        if self.initial_population == 0 {
            return Err(Error::config("initial_population", "must be positive"));
        }
        if self.initial_population < self.operator_counts.elite {
            return Err(Error::config(
                "initial_population",
                format!(
                    "{} is smaller than the elite count {}",
                    self.initial_population, self.operator_counts.elite
                ),
            ));
        }
        if self.max_generations > 0 && self.operator_counts.follow_up_size() == 0 {
            return Err(Error::config(
                "operator_counts",
                "follow-up generations would be empty",
            ));
        }
        for (field, rate) in [
            ("mutation_rate_g1", self.mutation_rate_g1),
            ("mutation_rate_g2", self.mutation_rate_g2),
        ] {
            if let Some(r) = rate {
                if !(r >= T::zero() && r <= T::one()) {
                    return Err(Error::config(field, "must lie in [0, 1]"));
                }
            }
        }
        Ok(())
    }
}
