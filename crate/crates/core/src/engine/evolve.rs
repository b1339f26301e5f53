//! Generational loop.
//!
//! Generation 0 holds `initial_population` random chromosomes. Every later
//! generation is built as elites, crossover children, mutants and fresh
//! random chromosomes, in that order, which is also the order in which the
//! single seeded random stream is consumed. Evaluation happens afterwards and
//! is a pure map, so running it on the rayon pool does not affect results.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::OptimizationConfig;
use super::fitness::{fitness, select_elite, Individual};
use super::operators::{crossover_intermediate, crossover_onepoint, mutate, Fitter, MutationRates};
use crate::error::{Error, Result};
use crate::genotype::Genotype;
use crate::scalar::{compensated_sum, Scalar};
use crate::scenario::ScenarioSet;

const IMPROVEMENT_THRESHOLD: f64 = 1e-12;

/// Per-generation progress.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord<T> {
    pub generation: usize,
    pub population_size: usize,
    /// Best penalized fitness within this generation.
    pub best_fitness: T,
    pub best_raw_variance: T,
    pub best_shortfall_probability: T,
    pub mean_fitness: T,
    /// Best fitness seen in any generation so far.
    pub best_ever_fitness: T,
}

#[derive(Debug, Clone)]
pub struct Evolution<T: Scalar> {
    pub best: Individual<T>,
    pub history: Vec<GenerationRecord<T>>,
    /// Number of follow-up generations produced after the initial one.
    pub generations_run: usize,
    pub final_population: Vec<Individual<T>>,
}

/// Runs the evolutionary search. Deterministic in `(scenarios, cfg)`.
pub fn evolve<T: Scalar>(
    scenarios: &ScenarioSet<T>,
    cfg: &OptimizationConfig<T>,
) -> Result<Evolution<T>> {
    cfg.validate()?;
    let n_assets = scenarios.n_assets();
    if n_assets == 0 {
        return Err(Error::config("scenarios", "no assets"));
    }
    let rates = MutationRates {
        g1: cfg
            .mutation_rate_g1
            .unwrap_or_else(|| MutationRates::per_length(n_assets, cfg.b).g1),
        g2: cfg
            .mutation_rate_g2
            .unwrap_or_else(|| MutationRates::per_length(n_assets, cfg.b).g2),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let initial: Vec<Genotype<T>> = (0..cfg.initial_population)
        .map(|_| Genotype::random(n_assets, cfg.b, &mut rng))
        .collect();
    let mut population = evaluate_all(initial, scenarios, cfg)?;

    let mut best = best_of(&population).clone();
    let mut history = vec![record(0, &population, &best)];
    let mut stale = 0usize;
    let mut generations_run = 0usize;

    for generation in 1..=cfg.max_generations {
        let children = breed(&population, cfg, n_assets, rates, &mut rng)?;
        let elites = select_elite(&population, cfg.operator_counts.elite)?;
        let offspring = evaluate_all(children, scenarios, cfg)?;
        population = elites.into_iter().chain(offspring).collect();
        generations_run = generation;

        let candidate = best_of(&population);
        let improved = best.fitness() - candidate.fitness() > T::of(IMPROVEMENT_THRESHOLD);
        if candidate.rank_cmp(&best).is_lt() {
            best = candidate.clone();
        }
        history.push(record(generation, &population, &best));

        stale = if improved { 0 } else { stale + 1 };
        if cfg.stagnation_patience > 0 && stale >= cfg.stagnation_patience {
            break;
        }
    }

    Ok(Evolution {
        best,
        history,
        generations_run,
        final_population: population,
    })
}

/// Crossover children, mutants and random additions for the next
/// generation; elites are copied by the caller.
fn breed<T: Scalar>(
    population: &[Individual<T>],
    cfg: &OptimizationConfig<T>,
    n_assets: usize,
    rates: MutationRates<T>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Genotype<T>>> {
    let counts = cfg.operator_counts;
    let (n_onepoint, n_intermediate) = counts.crossover_split();
    let mut children = Vec::with_capacity(counts.crossover + counts.mutation + counts.random);

    for i in 0..counts.crossover {
        let a = tournament(population, rng);
        let b = tournament(population, rng);
        let fitter = Fitter::of(a.fitness(), b.fitness());
        let child = if i < n_onepoint {
            crossover_onepoint(&a.genotype, &b.genotype, fitter, rng)?
        } else {
            crossover_intermediate(&a.genotype, &b.genotype, fitter, rng)?
        };
        children.push(child);
    }
    debug_assert_eq!(children.len(), n_onepoint + n_intermediate);

    for _ in 0..counts.mutation {
        let parent = tournament(population, rng);
        children.push(mutate(&parent.genotype, rates, rng)?);
    }
    for _ in 0..counts.random {
        children.push(Genotype::random(n_assets, cfg.b, rng));
    }
    Ok(children)
}

/// Binary tournament: two uniform draws, the fitter wins, ties go to the first.
fn tournament<'a, T: Scalar, R: Rng + ?Sized>(
    population: &'a [Individual<T>],
    rng: &mut R,
) -> &'a Individual<T> {
    let a = &population[rng.gen_range(0..population.len())];
    let b = &population[rng.gen_range(0..population.len())];
    if b.rank_cmp(a).is_lt() {
        b
    } else {
        a
    }
}

fn evaluate_all<T: Scalar>(
    genotypes: Vec<Genotype<T>>,
    scenarios: &ScenarioSet<T>,
    cfg: &OptimizationConfig<T>,
) -> Result<Vec<Individual<T>>> {
    genotypes
        .par_iter()
        .map(|g| fitness(g, scenarios, cfg))
        .collect()
}

fn best_of<T: Scalar>(population: &[Individual<T>]) -> &Individual<T> {
    population
        .iter()
        .reduce(|best, x| if x.rank_cmp(best).is_lt() { x } else { best })
        .expect("population is never empty")
}

fn record<T: Scalar>(
    generation: usize,
    population: &[Individual<T>],
    best_ever: &Individual<T>,
) -> GenerationRecord<T> {
    let best = best_of(population);
    let mean = compensated_sum(population.iter().map(Individual::fitness))
        / T::of(population.len() as f64);
    GenerationRecord {
        generation,
        population_size: population.len(),
        best_fitness: best.fitness(),
        best_raw_variance: best.raw_variance(),
        best_shortfall_probability: best.stats().shortfall_probability,
        mean_fitness: mean,
        best_ever_fitness: best_ever.fitness(),
    }
}

/// Writes the per-generation log as CSV:
/// `generation,best_fitness,best_raw_variance,best_shortfall_probability,mean_fitness`.
pub fn write_history_csv<T: Scalar>(
    path: impl AsRef<Path>,
    history: &[GenerationRecord<T>],
) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(
            out,
            "generation,best_fitness,best_raw_variance,best_shortfall_probability,mean_fitness"
        )?;
        for r in history {
            writeln!(
                out,
                "{},{:e},{:e},{},{:e}",
                r.generation,
                r.best_fitness,
                r.best_raw_variance,
                r.best_shortfall_probability,
                r.mean_fitness
            )?;
        }
        out.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

/// Saves genotypes as a JSON array.
pub fn save_population<T: Scalar>(path: impl AsRef<Path>, genotypes: &[Genotype<T>]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer(BufWriter::new(file), genotypes).map_err(|e| Error::io(path, e.into()))
}

pub fn load_population<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<Genotype<T>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Format {
        row: e.line(),
        message: e.to_string(),
    })
}
