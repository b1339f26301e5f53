//! Two-part chromosome: budget buckets `g1` and the asset-selection bitstring `g2`.
//!
//! Decoding hands the `b` buckets round-robin to the selected assets in
//! ascending index order (bucket `i` goes to the `(i mod k)`-th selected
//! asset), sums each asset's bucket values, normalizes to a budget of one and
//! finally enforces the per-asset bounds by clip-and-redistribute.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};
use crate::scenario::{Bounds, Portfolio};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "GenotypeRepr<T>", into = "GenotypeRepr<T>")]
pub struct Genotype<T: Scalar> {
    g1: Vec<T>,
    g2: Vec<bool>,
}

impl<T: Scalar> Genotype<T> {
    pub fn new(g1: Vec<T>, g2: Vec<bool>) -> Result<Self> {
        if g1.is_empty() {
            return Err(Error::Validation("g1 needs at least one bucket".into()));
        }
        if let Some(i) = g1
            .iter()
            .position(|v| !v.is_finite() || *v < T::zero() || *v > T::one())
        {
            return Err(Error::Validation(format!(
                "bucket {i} = {} outside [0, 1]",
                g1[i]
            )));
        }
        if !g2.iter().any(|&bit| bit) {
            return Err(Error::Validation("g2 selects no asset".into()));
        }
        Ok(Self { g1, g2 })
    }

    /// Assembles a child from variation operators. `g1` is clamped to [0, 1]
    /// and an empty selection gets `fallback_bit` set.
    pub(crate) fn repaired(g1: Vec<T>, mut g2: Vec<bool>, fallback_bit: usize) -> Self {
        let g1 = g1
            .into_iter()
            .map(|v| v.max(T::zero()).min(T::one()))
            .collect();
        if !g2.iter().any(|&bit| bit) {
            g2[fallback_bit] = true;
        }
        Self { g1, g2 }
    }

    /// Uniform buckets, fair coin per selection bit. An empty selection is
    /// repaired by setting one uniformly chosen bit.
    pub fn random<R: Rng + ?Sized>(n_assets: usize, n_buckets: usize, rng: &mut R) -> Self {
        assert!(n_assets >= 1 && n_buckets >= 1, "need a >= 1 and b >= 1");
        let g1 = (0..n_buckets).map(|_| T::of(rng.gen::<f64>())).collect();
        let mut g2: Vec<bool> = (0..n_assets).map(|_| rng.gen::<bool>()).collect();
        if !g2.iter().any(|&bit| bit) {
            g2[rng.gen_range(0..n_assets)] = true;
        }
        Self { g1, g2 }
    }

    pub fn g1(&self) -> &[T] {
        &self.g1
    }

    pub fn g2(&self) -> &[bool] {
        &self.g2
    }

    pub fn n_buckets(&self) -> usize {
        self.g1.len()
    }

    pub fn n_assets(&self) -> usize {
        self.g2.len()
    }

    /// Chromosome length `b + a`.
    pub fn len(&self) -> usize {
        self.g1.len() + self.g2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.g2
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j)
    }

    pub(crate) fn first_selected(&self) -> usize {
        self.selected().next().unwrap_or(0)
    }

    pub fn decode(&self, bounds: &Bounds<T>) -> Result<Portfolio<T>> {
        let selected: Vec<usize> = self.selected().collect();
        let k = selected.len();
        if !bounds.admits(k) {
            return Err(Error::InfeasibleBounds {
                selected: k,
                lower: bounds.lower().as_f64(),
                upper: bounds.upper().as_f64(),
            });
        }

        let mass: Vec<T> = (0..k)
            .map(|slot| compensated_sum(self.g1.iter().skip(slot).step_by(k).copied()))
            .collect();
        let total = compensated_sum(mass.iter().copied());
        let share: Vec<T> = if total > T::zero() {
            mass.iter().map(|&m| m / total).collect()
        } else {
            vec![T::one() / T::of(k as f64); k]
        };
        let share = enforce_bounds(&share, bounds.lower(), bounds.upper());

        let mut weights = vec![T::zero(); self.n_assets()];
        for (&j, w) in selected.iter().zip(share) {
            weights[j] = w;
        }
        Portfolio::new(weights, bounds)
    }
}

/// Clips shares to `[lower, upper]` and redistributes the residual budget over
/// the still-free entries in proportion to their original shares. Each round
/// pins at least one entry, so at most `share.len()` rounds run.
fn enforce_bounds<T: Scalar>(share: &[T], lower: T, upper: T) -> Vec<T> {
    let k = share.len();
    let mut pinned: Vec<Option<T>> = vec![None; k];
    let mut values = share.to_vec();
    for _ in 0..=k {
        let free: Vec<usize> = (0..k).filter(|&i| pinned[i].is_none()).collect();
        if free.is_empty() {
            break;
        }
        let residual = T::one() - compensated_sum(pinned.iter().flatten().copied());
        let free_mass = compensated_sum(free.iter().map(|&i| share[i]));
        for &i in &free {
            values[i] = if free_mass > T::zero() {
                residual * share[i] / free_mass
            } else {
                residual / T::of(free.len() as f64)
            };
        }
        let excess = compensated_sum(free.iter().map(|&i| (values[i] - upper).max(T::zero())));
        let deficit = compensated_sum(free.iter().map(|&i| (lower - values[i]).max(T::zero())));
        if excess == T::zero() && deficit == T::zero() {
            break;
        }
        for &i in &free {
            if excess >= deficit && values[i] > upper {
                pinned[i] = Some(upper);
            }
            if deficit >= excess && values[i] < lower {
                pinned[i] = Some(lower);
            }
        }
    }
    values
        .into_iter()
        .zip(pinned)
        .map(|(v, p)| p.unwrap_or(v))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct GenotypeRepr<T> {
    g1: Vec<T>,
    g2: String,
}

impl<T: Scalar> TryFrom<GenotypeRepr<T>> for Genotype<T> {
    type Error = Error;

    fn try_from(repr: GenotypeRepr<T>) -> Result<Self> {
        let g2 = repr
            .g2
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Validation(format!("g2 contains `{other}`"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Genotype::new(repr.g1, g2)
    }
}

impl<T: Scalar> From<Genotype<T>> for GenotypeRepr<T> {
    fn from(g: Genotype<T>) -> Self {
        GenotypeRepr {
            g2: g.g2.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            g1: g.g1,
        }
    }
}
