//! Scenario-based portfolio optimization with a shortfall-probability
//! constraint, solved by a bucket/bitstring evolutionary algorithm.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod engine;
pub mod error;
pub mod genotype;
pub mod ingest;
pub mod oracle;
pub mod scalar;
pub mod scenario;

pub use engine::{evolve, fitness, Evolution, Individual, OperatorCounts, OptimizationConfig};
pub use error::{Error, Result};
pub use genotype::Genotype;
pub use ingest::{load_prices, weekly_returns, PriceSeries};
pub use oracle::{covariance_variance_check, equal_weight_portfolio, grid_search};
pub use scalar::Scalar;
pub use scenario::{profit_distribution, Bounds, Distribution, Portfolio, ScenarioSet, Summary};

pub type ScenarioSet64 = ScenarioSet<f64>;
pub type Portfolio64 = Portfolio<f64>;
pub type Distribution64 = Distribution<f64>;
pub type Genotype64 = Genotype<f64>;
pub type Config64 = OptimizationConfig<f64>;
pub type Individual64 = Individual<f64>;

pub type ScenarioSet32 = ScenarioSet<f32>;
pub type Portfolio32 = Portfolio<f32>;
pub type Distribution32 = Distribution<f32>;
pub type Genotype32 = Genotype<f32>;
pub type Config32 = OptimizationConfig<f32>;
pub type Individual32 = Individual<f32>;
