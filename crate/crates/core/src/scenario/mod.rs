//! Scenario sets and the probability-weighted profit/loss mathematics.
//!
//! A [`ScenarioSet`] is a finite `s x a` matrix of joint asset returns, each row
//! carrying its own probability. Multiplying it with a [`Portfolio`] yields the
//! portfolio's [`Distribution`] of profits; the loss is the negated profit.

mod io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet<T> {
    returns: Vec<T>,
    probabilities: Vec<T>,
    labels: Vec<String>,
}

impl<T: Scalar> ScenarioSet<T> {
    /// Builds a scenario set from rows of per-asset returns.
    pub fn new(rows: Vec<Vec<T>>, probabilities: Vec<T>, labels: Vec<String>) -> Result<Self> {
        let n_assets = labels.len();
        if n_assets == 0 {
            return Err(Error::Validation(
                "scenario set needs at least one asset".into(),
            ));
        }
        if rows.is_empty() {
            return Err(Error::Validation(
                "scenario set needs at least one scenario".into(),
            ));
        }
        if rows.len() != probabilities.len() {
            return Err(Error::Dimension(format!(
                "{} scenarios but {} probabilities",
                rows.len(),
                probabilities.len()
            )));
        }
        let mut returns = Vec::with_capacity(rows.len() * n_assets);
        for (k, row) in rows.into_iter().enumerate() {
            if row.len() != n_assets {
                return Err(Error::Dimension(format!(
                    "scenario {k} has {} returns, expected {n_assets}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|r| !r.is_finite()) {
                return Err(Error::Validation(format!(
                    "scenario {k}, asset {j}: return is not finite"
                )));
            }
            returns.extend(row);
        }
        check_probabilities(&probabilities)?;
        Ok(Self {
            returns,
            probabilities,
            labels,
        })
    }

    /// Scenario set with `p_s = 1/s` for every row.
    pub fn equiprobable(rows: Vec<Vec<T>>, labels: Vec<String>) -> Result<Self> {
        let s = rows.len();
        let p = if s == 0 {
            T::zero()
        } else {
            T::one() / T::of(s as f64)
        };
        Self::new(rows, vec![p; s], labels)
    }

    pub fn n_scenarios(&self) -> usize {
        self.probabilities.len()
    }

    pub fn n_assets(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// Returns of scenario `k`, one per asset.
    pub fn scenario(&self, k: usize) -> &[T] {
        let a = self.n_assets();
        &self.returns[k * a..(k + 1) * a]
    }

    pub fn scenarios(&self) -> impl Iterator<Item = &[T]> {
        self.returns.chunks_exact(self.n_assets())
    }

    /// Return column of asset `j` across all scenarios.
    pub fn asset_returns(&self, j: usize) -> Vec<T> {
        self.scenarios().map(|row| row[j]).collect()
    }

    /// Probability-weighted mean return of every asset.
    pub fn asset_means(&self) -> Vec<T> {
        (0..self.n_assets())
            .map(|j| {
                compensated_sum(
                    self.scenarios()
                        .zip(&self.probabilities)
                        .map(|(row, &p)| p * row[j]),
                )
            })
            .collect()
    }
}

fn check_probabilities<T: Scalar>(probabilities: &[T]) -> Result<()> {
    if let Some(k) = probabilities
        .iter()
        .position(|p| !p.is_finite() || *p < T::zero() || *p > T::one())
    {
        return Err(Error::Validation(format!(
            "probability of scenario {k} is {} (must lie in [0, 1])",
            probabilities[k]
        )));
    }
    let total = compensated_sum(probabilities.iter().copied());
    if (total - T::one()).abs() > T::sum_tolerance() {
        return Err(Error::Validation(format!(
            "scenario probabilities sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// Per-asset weight limits `l <= x_a <= u` applied to held positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "(T, T)", into = "(T, T)")]
pub struct Bounds<T: Scalar> {
    lower: T,
    upper: T,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite())
            || lower < T::zero()
            || upper > T::one()
            || lower > upper
        {
            return Err(Error::config(
                "bounds",
                format!("need 0 <= l <= u <= 1, got l = {lower}, u = {upper}"),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    /// Whether `k` held positions can sum to one inside the limits.
    pub fn admits(&self, k: usize) -> bool {
        let k = T::of(k as f64);
        let tol = T::sum_tolerance();
        k > T::zero() && k * self.lower <= T::one() + tol && k * self.upper >= T::one() - tol
    }

    fn contains(&self, w: T) -> bool {
        let tol = T::sum_tolerance();
        w >= self.lower - tol && w <= self.upper + tol
    }
}

impl<T: Scalar> Default for Bounds<T> {
    fn default() -> Self {
        Self {
            lower: T::zero(),
            upper: T::one(),
        }
    }
}

impl<T: Scalar> TryFrom<(T, T)> for Bounds<T> {
    type Error = Error;

    fn try_from((lower, upper): (T, T)) -> Result<Self> {
        Self::new(lower, upper)
    }
}

impl<T: Scalar> From<Bounds<T>> for (T, T) {
    fn from(b: Bounds<T>) -> Self {
        (b.lower, b.upper)
    }
}

/// Budget allocation over the assets of a scenario set.
///
/// Weights sum to one. Zero weights mark assets that are not held; every held
/// position lies within the [`Bounds`] the portfolio was validated against.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio<T> {
    weights: Vec<T>,
}

impl<T: Scalar> Portfolio<T> {
    pub fn new(weights: Vec<T>, bounds: &Bounds<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Validation("portfolio has no assets".into()));
        }
        if let Some(j) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::Validation(format!("weight {j} is not finite")));
        }
        if let Some(j) = weights
            .iter()
            .position(|&w| w != T::zero() && !bounds.contains(w))
        {
            return Err(Error::Validation(format!(
                "weight {j} = {} outside [{}, {}]",
                weights[j], bounds.lower, bounds.upper
            )));
        }
        if weights.iter().any(|&w| w < T::zero()) {
            return Err(Error::Validation("negative weight (short position)".into()));
        }
        let total = compensated_sum(weights.iter().copied());
        if (total - T::one()).abs() > T::sum_tolerance() {
            return Err(Error::Validation(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn into_weights(self) -> Vec<T> {
        self.weights
    }
}

/// Probability-weighted profit outcomes of one portfolio.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    profits: Vec<T>,
    probabilities: Vec<T>,
}

/// Mean, standard deviation and shortfall probability of a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary<T> {
    pub mean: T,
    pub std_dev: T,
    pub shortfall_probability: T,
}

impl<T: Scalar> Distribution<T> {
    pub fn new(profits: Vec<T>, probabilities: Vec<T>) -> Result<Self> {
        if profits.len() != probabilities.len() {
            return Err(Error::Dimension(format!(
                "{} profits but {} probabilities",
                profits.len(),
                probabilities.len()
            )));
        }
        if profits.is_empty() {
            return Err(Error::Validation("empty distribution".into()));
        }
        if profits.iter().any(|p| !p.is_finite()) {
            return Err(Error::Validation("profit is not finite".into()));
        }
        check_probabilities(&probabilities)?;
        Ok(Self {
            profits,
            probabilities,
        })
    }

    pub fn profits(&self) -> &[T] {
        &self.profits
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    fn weighted<F: Fn(T) -> T>(&self, f: F) -> T {
        compensated_sum(
            self.profits
                .iter()
                .zip(&self.probabilities)
                .map(|(&x, &p)| p * f(x)),
        )
    }

    /// `E[pi_x] = sum_s p_s * profit_s`.
    pub fn expected_profit(&self) -> T {
        self.weighted(|x| x)
    }

    /// Probability-weighted population variance of the loss `l = -profit`.
    pub fn loss_variance(&self) -> T {
        let mean_loss = self.weighted(|x| -x);
        let var = self.weighted(|x| {
            let d = -x - mean_loss;
            d * d
        });
        var.max(T::zero())
    }

    /// `P(pi_x <= delta)`; ties at `delta` count as shortfall.
    pub fn shortfall_probability(&self, delta: T) -> T {
        let p = compensated_sum(
            self.profits
                .iter()
                .zip(&self.probabilities)
                .filter(|(&x, _)| x <= delta)
                .map(|(_, &p)| p),
        );
        p.max(T::zero()).min(T::one())
    }

    pub fn summary(&self, delta: T) -> Summary<T> {
        Summary {
            mean: self.expected_profit(),
            std_dev: self.loss_variance().sqrt(),
            shortfall_probability: self.shortfall_probability(delta),
        }
    }
}

/// Per-scenario profit `pi_s = sum_a r[s][a] * x_a` of a portfolio.
pub fn profit_distribution<T: Scalar>(
    scenarios: &ScenarioSet<T>,
    portfolio: &Portfolio<T>,
) -> Result<Distribution<T>> {
    if portfolio.len() != scenarios.n_assets() {
        return Err(Error::Dimension(format!(
            "portfolio has {} weights, scenario set has {} assets",
            portfolio.len(),
            scenarios.n_assets()
        )));
    }
    if portfolio.weights().iter().any(|w| !w.is_finite()) {
        return Err(Error::Validation("portfolio weight is not finite".into()));
    }
    let profits = scenarios
        .scenarios()
        .map(|row| compensated_sum(row.iter().zip(portfolio.weights()).map(|(&r, &w)| r * w)))
        .collect();
    Ok(Distribution {
        profits,
        probabilities: scenarios.probabilities.clone(),
    })
}
