//! Variation operators. Children that end up selecting no asset get the
//! lowest selected bit of the fitter parent switched back on.

use rand::Rng;

use crate::error::{Error, Result};
use crate::genotype::Genotype;
use crate::scalar::Scalar;

/// Which of two parents has the better fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fitter {
    A,
    B,
}

impl Fitter {
    /// `A` unless `b` is strictly better.
    pub fn of<T: PartialOrd>(fitness_a: T, fitness_b: T) -> Self {
        if fitness_b < fitness_a {
            Fitter::B
        } else {
            Fitter::A
        }
    }

    fn pick<'a, T>(self, a: &'a T, b: &'a T) -> &'a T {
        match self {
            Fitter::A => a,
            Fitter::B => b,
        }
    }
}

fn check_dims<T: Scalar>(a: &Genotype<T>, b: &Genotype<T>) -> Result<()> {
    if a.n_assets() != b.n_assets() || a.n_buckets() != b.n_buckets() {
        return Err(Error::Dimension(format!(
            "parents differ: (a = {}, b = {}) vs (a = {}, b = {})",
            a.n_assets(),
            a.n_buckets(),
            b.n_assets(),
            b.n_buckets()
        )));
    }
    Ok(())
}

/// 1-point crossover on both parts with independent cuts drawn from
/// `1..b` and `1..a`. A part of length one cannot be cut and is copied
/// from `parent_a`.
pub fn crossover_onepoint<T: Scalar, R: Rng + ?Sized>(
    parent_a: &Genotype<T>,
    parent_b: &Genotype<T>,
    fitter: Fitter,
    rng: &mut R,
) -> Result<Genotype<T>> {
    check_dims(parent_a, parent_b)?;
    let cut = |len: usize, rng: &mut R| if len > 1 { rng.gen_range(1..len) } else { len };
    let cut_g1 = cut(parent_a.n_buckets(), rng);
    let cut_g2 = cut(parent_a.n_assets(), rng);
    onepoint_at(parent_a, parent_b, cut_g1, cut_g2, fitter)
}

/// 1-point crossover at fixed cut positions: prefix from `parent_a`, suffix
/// from `parent_b`.
pub fn onepoint_at<T: Scalar>(
    parent_a: &Genotype<T>,
    parent_b: &Genotype<T>,
    cut_g1: usize,
    cut_g2: usize,
    fitter: Fitter,
) -> Result<Genotype<T>> {
    check_dims(parent_a, parent_b)?;
    if cut_g1 > parent_a.n_buckets() || cut_g2 > parent_a.n_assets() {
        return Err(Error::Dimension("cut position beyond chromosome".into()));
    }
    let g1 = splice(parent_a.g1(), parent_b.g1(), cut_g1);
    let g2 = splice(parent_a.g2(), parent_b.g2(), cut_g2);
    let fallback = fitter.pick(parent_a, parent_b).first_selected();
    Ok(Genotype::repaired(g1, g2, fallback))
}

fn splice<V: Copy>(a: &[V], b: &[V], cut: usize) -> Vec<V> {
    a[..cut].iter().chain(&b[cut..]).copied().collect()
}

/// Intermediate crossover of `g1` with one mixing coefficient drawn
/// uniformly from [0, 1); `g2` comes from the fitter parent.
pub fn crossover_intermediate<T: Scalar, R: Rng + ?Sized>(
    parent_a: &Genotype<T>,
    parent_b: &Genotype<T>,
    fitter: Fitter,
    rng: &mut R,
) -> Result<Genotype<T>> {
    check_dims(parent_a, parent_b)?;
    let alpha = T::of(rng.gen::<f64>());
    blend(parent_a, parent_b, alpha, fitter)
}

/// `alpha * g1_a + (1 - alpha) * g1_b`.
pub fn blend<T: Scalar>(
    parent_a: &Genotype<T>,
    parent_b: &Genotype<T>,
    alpha: T,
    fitter: Fitter,
) -> Result<Genotype<T>> {
    check_dims(parent_a, parent_b)?;
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::Validation(format!(
            "mixing coefficient {alpha} outside [0, 1]"
        )));
    }
    let g1 = parent_a
        .g1()
        .iter()
        .zip(parent_b.g1())
        .map(|(&x, &y)| {
            if x == y {
                x
            } else {
                alpha * x + (T::one() - alpha) * y
            }
        })
        .collect();
    let donor = fitter.pick(parent_a, parent_b);
    Ok(Genotype::repaired(
        g1,
        donor.g2().to_vec(),
        donor.first_selected(),
    ))
}

/// Per-gene mutation probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationRates<T> {
    pub g1: T,
    pub g2: T,
}

impl<T: Scalar> MutationRates<T> {
    /// `1/b` per bucket and `1/a` per selection bit.
    pub fn per_length(n_assets: usize, n_buckets: usize) -> Self {
        Self {
            g1: T::one() / T::of(n_buckets.max(1) as f64),
            g2: T::one() / T::of(n_assets.max(1) as f64),
        }
    }
}

/// Uniform reset of buckets and bit flips of the selection.
pub fn mutate<T: Scalar, R: Rng + ?Sized>(
    parent: &Genotype<T>,
    rates: MutationRates<T>,
    rng: &mut R,
) -> Result<Genotype<T>> {
    for (name, rate) in [("g1", rates.g1), ("g2", rates.g2)] {
        if !(rate >= T::zero() && rate <= T::one()) {
            return Err(Error::config(
                "mutation_rates",
                format!("{name} rate {rate} outside [0, 1]"),
            ));
        }
    }
    let g1_rate = rates.g1.as_f64();
    let g2_rate = rates.g2.as_f64();
    let g1 = parent
        .g1()
        .iter()
        .map(|&v| {
            if rng.gen::<f64>() < g1_rate {
                T::of(rng.gen::<f64>())
            } else {
                v
            }
        })
        .collect();
    let g2 = parent
        .g2()
        .iter()
        .map(|&bit| {
            if rng.gen::<f64>() < g2_rate {
                !bit
            } else {
                bit
            }
        })
        .collect();
    Ok(Genotype::repaired(g1, g2, parent.first_selected()))
}
