//! Commands behind the `espo` binary. Each returns a value the binary prints,
//! so the same code paths are exercised directly by the test suites.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use espo::engine::{evolve, write_history_csv, GenerationRecord};
use espo::oracle::{equal_weight_portfolio, grid_search, GridOptimum};
use espo::{
    profit_distribution, Bounds, Config64, Distribution64, Individual64, Portfolio64, ScenarioSet64,
};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const HISTOGRAM_BINS: usize = 30;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] espo::Error),
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: relative fitness gap {gap:e} exceeds tolerance {tolerance:e}")]
    VerificationFailed { gap: f64, tolerance: f64 },
}

pub type CliResult<T> = Result<T, CliError>;

/// Optional command-line overrides of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub constraint: Option<bool>,
    pub log: Option<PathBuf>,
}

pub fn load_config(path: &Path, overrides: &Overrides) -> CliResult<Config64> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    let mut cfg: Config64 = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(on) = overrides.constraint {
        cfg.probabilistic_constraint_enabled = on;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestReport {
    pub scenarios: usize,
    pub assets: usize,
}

pub fn cmd_ingest(prices: &Path, out: &Path) -> CliResult<IngestReport> {
    let series = espo::load_prices::<f64>(prices)?;
    let scenarios = espo::weekly_returns(&series)?;
    scenarios.write_csv(out)?;
    Ok(IngestReport {
        scenarios: scenarios.n_scenarios(),
        assets: scenarios.n_assets(),
    })
}

/// Contents of the result JSON written by `optimize` and read by `compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub weights: IndexMap<String, f64>,
    pub mean: f64,
    pub std_dev: f64,
    pub shortfall_probability: f64,
    pub delta: f64,
    pub raw_variance: f64,
    pub penalty: f64,
    pub fitness: f64,
    pub generations_run: usize,
    pub seed: u64,
    pub config: Config64,
}

impl OptimizationResult {
    fn new(best: &Individual64, generations_run: usize, labels: &[String], cfg: &Config64) -> Self {
        let stats = best.stats();
        Self {
            weights: labels
                .iter()
                .cloned()
                .zip(best.portfolio.weights().iter().copied())
                .collect(),
            mean: stats.mean,
            std_dev: stats.std_dev,
            shortfall_probability: stats.shortfall_probability,
            delta: cfg.reporting_delta(),
            raw_variance: best.raw_variance(),
            penalty: best.penalty(),
            fitness: best.fitness(),
            generations_run,
            seed: cfg.seed,
            config: cfg.clone(),
        }
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.into(),
            source,
        })
    }

    /// Weights reordered to the scenario set's asset order.
    pub fn portfolio_for(&self, scenarios: &ScenarioSet64) -> CliResult<Portfolio64> {
        let labels = scenarios.labels();
        let same_assets = self.weights.len() == labels.len()
            && labels.iter().all(|l| self.weights.contains_key(l));
        if !same_assets {
            return Err(espo::Error::Validation(format!(
                "result assets {:?} do not match scenario assets {:?}",
                self.weights.keys().collect::<Vec<_>>(),
                labels
            ))
            .into());
        }
        let weights = labels.iter().map(|l| self.weights[l]).collect();
        Ok(Portfolio64::new(weights, &Bounds::default())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub low: f64,
    pub high: f64,
    pub probability: f64,
}

/// Equal-width bins over `[min, max]` of the profits; the last bin is closed.
/// A degenerate range puts all mass into the first bin.
pub fn histogram(dist: &Distribution64, bins: usize) -> Vec<HistogramBin> {
    let profits = dist.profits();
    let lo = profits.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = profits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut mass = vec![0.0; bins];
    for (&x, &p) in profits.iter().zip(dist.probabilities()) {
        let idx = if width > 0.0 {
            (((x - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        mass[idx] += p;
    }
    mass.into_iter()
        .enumerate()
        .map(|(i, probability)| HistogramBin {
            low: lo + width * i as f64,
            high: if i + 1 == bins {
                hi
            } else {
                lo + width * (i + 1) as f64
            },
            probability,
        })
        .collect()
}

pub fn write_histogram(path: &Path, bins: &[HistogramBin]) -> CliResult<()> {
    let mut text = String::from("bin_low,bin_high,probability\n");
    for b in bins {
        writeln!(text, "{},{},{}", b.low, b.high, b.probability).expect("write to String");
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

/// `result.json` -> `result.histogram.csv`.
pub fn default_histogram_path(out: &Path) -> PathBuf {
    out.with_extension("histogram.csv")
}

pub fn cmd_optimize(
    scenarios_path: &Path,
    config_path: &Path,
    out: &Path,
    histogram_path: Option<&Path>,
    overrides: &Overrides,
) -> CliResult<OptimizationResult> {
    let scenarios = ScenarioSet64::read_csv(scenarios_path)?;
    let cfg = load_config(config_path, overrides)?;
    let evolution = evolve(&scenarios, &cfg)?;
    if let Some(log) = &overrides.log {
        write_history_csv(log, &evolution.history)?;
    }
    let result = OptimizationResult::new(
        &evolution.best,
        evolution.generations_run,
        scenarios.labels(),
        &cfg,
    );
    let json = serde_json::to_string_pretty(&result).map_err(|source| CliError::Json {
        path: out.into(),
        source,
    })?;
    fs::write(out, json + "\n").map_err(|source| CliError::Io {
        path: out.into(),
        source,
    })?;

    let dist = profit_distribution(&scenarios, &evolution.best.portfolio)?;
    let hist_path = histogram_path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| default_histogram_path(out));
    write_histogram(&hist_path, &histogram(&dist, HISTOGRAM_BINS))?;
    Ok(result)
}

/// One column of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub mean: f64,
    pub std_dev: f64,
    pub probability: f64,
}

pub fn compare_columns(
    scenarios: &ScenarioSet64,
    results: &[(String, OptimizationResult)],
    delta: f64,
) -> CliResult<Vec<Column>> {
    let mut portfolios = Vec::with_capacity(results.len() + 1);
    for (name, result) in results {
        portfolios.push((name.clone(), result.portfolio_for(scenarios)?));
    }
    portfolios.push((
        "1/N".to_string(),
        equal_weight_portfolio(scenarios.n_assets())?,
    ));
    portfolios
        .into_iter()
        .map(|(name, p)| {
            let s = profit_distribution(scenarios, &p)?.summary(delta);
            Ok(Column {
                name,
                mean: s.mean,
                std_dev: s.std_dev,
                probability: s.shortfall_probability,
            })
        })
        .collect()
}

pub fn render_table(columns: &[Column]) -> String {
    let width = columns
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(0)
        .max(10);
    let mut out = format!("{:<10}", "");
    for c in columns {
        write!(out, "  {:>width$}", c.name).unwrap();
    }
    out.push('\n');
    type Row = (&'static str, fn(&Column) -> f64);
    let rows: [Row; 3] = [
        ("Mean", |c| c.mean),
        ("Std.Dev.", |c| c.std_dev),
        ("Prob.", |c| c.probability),
    ];
    for (label, get) in rows {
        write!(out, "{label:<10}").unwrap();
        for c in columns {
            write!(out, "  {:>width$.4}", get(c)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn cmd_compare(
    scenarios_path: &Path,
    result_paths: &[PathBuf],
    delta: f64,
) -> CliResult<String> {
    let scenarios = ScenarioSet64::read_csv(scenarios_path)?;
    let results = result_paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string());
            OptimizationResult::read(p).map(|r| (name, r))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(render_table(&compare_columns(&scenarios, &results, delta)?))
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub evolved: Individual64,
    pub grid: GridOptimum<f64>,
    /// `(evolved - grid) / grid`; negative when the search beats the lattice.
    pub relative_gap: f64,
    pub tolerance: f64,
    pub history: Vec<GenerationRecord<f64>>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.relative_gap <= self.tolerance
    }

    pub fn report(&self, labels: &[String]) -> String {
        let mut out = String::new();
        let fmt = |w: &[f64]| {
            labels
                .iter()
                .zip(w)
                .map(|(l, w)| format!("{l}={w:.4}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(
            out,
            "evolutionary  fitness {:.6e}  {}",
            self.evolved.fitness(),
            fmt(self.evolved.portfolio.weights())
        )
        .unwrap();
        writeln!(
            out,
            "grid search   fitness {:.6e}  {}  ({} points)",
            self.grid.evaluation.fitness,
            fmt(self.grid.portfolio.weights()),
            self.grid.points_evaluated
        )
        .unwrap();
        writeln!(
            out,
            "relative gap  {:.3e} (tolerance {:.1e})",
            self.relative_gap, self.tolerance
        )
        .unwrap();
        out
    }
}

pub fn relative_gap(evolved: f64, reference: f64) -> f64 {
    let diff = evolved - reference;
    if reference.abs() > 0.0 {
        diff / reference.abs()
    } else {
        diff
    }
}

pub fn verify(
    scenarios: &ScenarioSet64,
    cfg: &Config64,
    step: f64,
    tolerance: f64,
) -> CliResult<VerifyOutcome> {
    if scenarios.n_assets() > espo::oracle::MAX_GRID_ASSETS {
        return Err(espo::Error::ComplexityGuard(format!(
            "verify supports at most {} assets, got {}",
            espo::oracle::MAX_GRID_ASSETS,
            scenarios.n_assets()
        ))
        .into());
    }
    let grid = grid_search(scenarios, cfg, step)?;
    let evolution = evolve(scenarios, cfg)?;
    let evolved = evolution.best;
    Ok(VerifyOutcome {
        relative_gap: relative_gap(evolved.fitness(), grid.evaluation.fitness),
        evolved,
        grid,
        tolerance,
        history: evolution.history,
    })
}

pub fn cmd_verify(
    scenarios_path: &Path,
    config_path: &Path,
    step: f64,
    tolerance: f64,
    overrides: &Overrides,
) -> CliResult<(VerifyOutcome, String)> {
    let scenarios = ScenarioSet64::read_csv(scenarios_path)?;
    let cfg = load_config(config_path, overrides)?;
    let outcome = verify(&scenarios, &cfg, step, tolerance)?;
    if let Some(log) = &overrides.log {
        write_history_csv(log, &outcome.history)?;
    }
    let report = outcome.report(scenarios.labels());
    Ok((outcome, report))
}
