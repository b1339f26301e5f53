//! Independent reference solutions: the 1/N portfolio, exhaustive search on
//! the simplex lattice and a covariance-matrix variance.

use crate::engine::{evaluate_portfolio, Evaluation, OptimizationConfig};
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};
use crate::scenario::{Bounds, Portfolio, ScenarioSet};

pub const MAX_GRID_ASSETS: usize = 5;
pub const MIN_GRID_STEP: f64 = 0.01;

pub fn equal_weight_portfolio<T: Scalar>(n_assets: usize) -> Result<Portfolio<T>> {
    if n_assets == 0 {
        return Err(Error::config(
            "n_assets",
            "1/N portfolio needs at least one asset",
        ));
    }
    let w = T::one() / T::of(n_assets as f64);
    Portfolio::new(vec![w; n_assets], &Bounds::default())
}

/// Number of lattice divisions `1/step`, if `step` divides one evenly.
fn divisions(step: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::config("step", format!("{step} is not in (0, 1]")));
    }
    let n = (1.0 / step).round();
    if ((n * step) - 1.0).abs() > 1e-9 {
        return Err(Error::config(
            "step",
            format!("{step} does not divide 1 evenly"),
        ));
    }
    Ok(n as usize)
}

/// Every weight vector `(c_1, ..., c_a) / n` with non-negative integer
/// counts summing to `n = 1/step`, in ascending lexicographic order.
pub fn simplex_lattice<T: Scalar>(n_assets: usize, step: f64) -> Result<Vec<Vec<T>>> {
    let n = divisions(step)?;
    let mut out = Vec::new();
    let mut counts = vec![0usize; n_assets];
    fill(&mut counts, 0, n, &mut |c| {
        out.push(
            c.iter()
                .map(|&k| T::of(k as f64) / T::of(n as f64))
                .collect(),
        )
    });
    Ok(out)
}

fn fill(counts: &mut [usize], pos: usize, remaining: usize, emit: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        emit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        fill(counts, pos + 1, remaining - c, emit);
    }
}

#[derive(Debug, Clone)]
pub struct GridOptimum<T: Scalar> {
    pub portfolio: Portfolio<T>,
    pub evaluation: Evaluation<T>,
    /// Lattice points that satisfied the bounds and were scored.
    pub points_evaluated: usize,
}

/// Exhaustive minimization of the penalized fitness over the simplex
/// lattice. Ties go to the lexicographically smallest weight vector.
pub fn grid_search<T: Scalar>(
    scenarios: &ScenarioSet<T>,
    cfg: &OptimizationConfig<T>,
    step: f64,
) -> Result<GridOptimum<T>> {
    let a = scenarios.n_assets();
    if a > MAX_GRID_ASSETS {
        return Err(Error::ComplexityGuard(format!(
            "grid search supports at most {MAX_GRID_ASSETS} assets, got {a}"
        )));
    }
    if step < MIN_GRID_STEP - 1e-12 {
        return Err(Error::ComplexityGuard(format!(
            "grid step {step} is below the minimum {MIN_GRID_STEP}"
        )));
    }
    let mut best: Option<GridOptimum<T>> = None;
    let mut scored = 0usize;
    for weights in simplex_lattice::<T>(a, step)? {
        let Ok(portfolio) = Portfolio::new(weights, &cfg.bounds) else {
            continue;
        };
        let evaluation = evaluate_portfolio(&portfolio, scenarios, cfg)?;
        scored += 1;
        if best
            .as_ref()
            .is_none_or(|b| evaluation.fitness < b.evaluation.fitness)
        {
            best = Some(GridOptimum {
                portfolio,
                evaluation,
                points_evaluated: 0,
            });
        }
    }
    let mut best = best
        .ok_or_else(|| Error::config("bounds", "no lattice point satisfies the weight bounds"))?;
    best.points_evaluated = scored;
    Ok(best)
}

/// `x' S x` with `S` the probability-weighted covariance of asset returns.
pub fn covariance_variance_check<T: Scalar>(
    scenarios: &ScenarioSet<T>,
    portfolio: &Portfolio<T>,
) -> Result<T> {
    let a = scenarios.n_assets();
    if portfolio.len() != a {
        return Err(Error::Dimension(format!(
            "portfolio has {} weights, scenario set has {a} assets",
            portfolio.len()
        )));
    }
    let means = scenarios.asset_means();
    let p = scenarios.probabilities();
    let mut cov = vec![T::zero(); a * a];
    for i in 0..a {
        for j in i..a {
            let c = compensated_sum(
                scenarios
                    .scenarios()
                    .zip(p)
                    .map(|(row, &ps)| ps * (row[i] - means[i]) * (row[j] - means[j])),
            );
            cov[i * a + j] = c;
            cov[j * a + i] = c;
        }
    }
    let x = portfolio.weights();
    let q = compensated_sum(
        (0..a)
            .flat_map(|i| (0..a).map(move |j| (i, j)))
            .map(|(i, j)| x[i] * cov[i * a + j] * x[j]),
    );
    Ok(q.max(T::zero()))
}
