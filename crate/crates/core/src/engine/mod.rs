//! Penalized-variance evolutionary optimizer.

mod config;
mod evolve;
mod fitness;
mod operators;

pub use config::{OperatorCounts, OptimizationConfig};
pub use evolve::{
    evolve, load_population, save_population, write_history_csv, Evolution, GenerationRecord,
};
pub use fitness::{
    evaluate_portfolio, fitness, probability_penalty, return_floor_penalty, select_elite,
    Evaluation, Individual,
};
pub use operators::{
    blend, crossover_intermediate, crossover_onepoint, mutate, onepoint_at, Fitter, MutationRates,
};
