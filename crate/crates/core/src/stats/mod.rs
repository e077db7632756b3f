//! Reproducible Monte Carlo ensembles and the estimators applied to them.
//!
//! Replicate `i` draws from `ChaCha8Rng::seed_from_u64(master_seed)` switched
//! to stream `i`, so replicates never share randomness and each one's draws do
//! not depend on how work is scheduled. Results are gathered in replicate
//! order and every reduction runs sequentially in that order, which makes an
//! ensemble bit-identical for any worker count.

mod fit;
mod homogeneity;
mod martingale;
mod summary;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::orderk::ProcessPath;
use crate::subordinators::{default_inverse_step, sample_inverse_path, MtssParams};
use crate::timechange::InverseMoments;

pub use fit::{fit_power_law, DependenceClass, PowerLawFit, MIN_FIT_POINTS};
pub use homogeneity::{two_sample_pmf_test, PmfComparison, MIN_EXPECTED_COUNT};
pub use martingale::{martingale_increment_test, IncrementInterval, Z_99};
pub use summary::{covariance_estimate, scalar_summary, EnsembleSummary, ScalarSummary};

pub type ReplicateRng = ChaCha8Rng;

/// Generator for replicate `index` of an ensemble seeded with `master_seed`.
pub fn replicate_rng(master_seed: u64, index: u64) -> ReplicateRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub replicates: u64,
    pub master_seed: u64,
    /// Thread count; results do not depend on it.
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub grid: Vec<f64>,
}

fn default_workers() -> usize {
    1
}

impl MonteCarloConfig {
    pub fn new(replicates: u64, master_seed: u64, workers: usize, grid: Vec<f64>) -> Result<Self> {
        let c = Self {
            replicates,
            master_seed,
            workers,
            grid,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(invalid("replicates", "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers", "must be at least 1"));
        }
        if self.grid.is_empty() {
            return Err(invalid("grid", "must not be empty"));
        }
        if self.grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("grid", "must be finite, non-negative and strictly increasing"));
        }
        Ok(())
    }
}

/// Runs `f(index, rng)` for every replicate and returns results in index order.
///
/// The first failing replicate (by index) is reported.
pub fn map_replicates<T, F>(replicates: u64, master_seed: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ReplicateRng) -> Result<T> + Sync,
{
    let run = |i: u64| f(i, &mut replicate_rng(master_seed, i));
    let results = collect(replicates, workers, run);
    let mut out = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        out.push(r.map_err(|e| Error::Replicate {
            index: i as u64,
            source: Box::new(e),
        })?);
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
fn collect<T: Send>(n: u64, workers: usize, run: impl Fn(u64) -> T + Sync) -> Vec<T> {
    use rayon::prelude::*;
    if workers <= 1 {
        return (0..n).map(run).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&run).collect()),
        Err(_) => (0..n).map(run).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn collect<T: Send>(n: u64, _workers: usize, run: impl Fn(u64) -> T + Sync) -> Vec<T> {
    (0..n).map(run).collect()
}

/// Replicate values at each grid time, stored column by column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub grid: Vec<f64>,
    /// `columns[j][i]` is replicate `i` at `grid[j]`.
    pub columns: Vec<Vec<f64>>,
    pub master_seed: u64,
}

impl Ensemble {
    pub fn replicates(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column_at(&self, t: f64) -> Result<&[f64]> {
        let j = self
            .grid
            .iter()
            .position(|&g| g == t)
            .ok_or_else(|| invalid("t", format!("{t} is not a grid time")))?;
        Ok(&self.columns[j])
    }

    pub fn summary(&self) -> EnsembleSummary {
        EnsembleSummary::from_columns(&self.grid, &self.columns, self.master_seed)
    }
}

/// Ensemble of samplers that return one value per grid time.
pub fn run_grid_ensemble<F>(config: &MonteCarloConfig, sampler: F) -> Result<Ensemble>
where
    F: Fn(&[f64], &mut ReplicateRng) -> Result<Vec<f64>> + Sync,
{
    config.validate()?;
    let grid = &config.grid;
    let rows = map_replicates(config.replicates, config.master_seed, config.workers, |_, rng| {
        let row = sampler(grid, rng)?;
        if row.len() != grid.len() {
            return Err(invalid("sampler", "must return one value per grid time"));
        }
        Ok(row)
    })?;
    let columns = (0..grid.len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    Ok(Ensemble {
        grid: grid.clone(),
        columns,
        master_seed: config.master_seed,
    })
}

/// Ensemble of path samplers, read off at the grid times.
pub fn run_ensemble_raw<F>(config: &MonteCarloConfig, sampler: F) -> Result<Ensemble>
where
    F: Fn(&[f64], &mut ReplicateRng) -> Result<ProcessPath> + Sync,
{
    run_grid_ensemble(config, |grid, rng| {
        let path = sampler(grid, rng)?;
        grid.iter().map(|&t| path.value_at(t)).collect()
    })
}

/// Summary of [`run_ensemble_raw`].
pub fn run_ensemble<F>(config: &MonteCarloConfig, sampler: F) -> Result<EnsembleSummary>
where
    F: Fn(&[f64], &mut ReplicateRng) -> Result<ProcessPath> + Sync,
{
    Ok(run_ensemble_raw(config, sampler)?.summary())
}

/// Moments of the inverse subordinator on `config.grid`.
///
/// `step` defaults to [`default_inverse_step`] at the last grid time.
pub fn inverse_moment_table(params: &MtssParams, step: Option<f64>, config: &MonteCarloConfig) -> Result<InverseMoments> {
    config.validate()?;
    let step = match step {
        Some(s) => s,
        None => default_inverse_step(params, *config.grid.last().unwrap())?,
    };
    let ensemble = run_grid_ensemble(config, |grid, rng| Ok(sample_inverse_path(params, grid, step, rng)?.values))?;
    let summary = ensemble.summary();
    Ok(InverseMoments {
        grid: summary.grid,
        mean: summary.mean,
        covariance: summary.covariance,
        stderr_mean: summary.stderr_mean,
        replicates: summary.replicates,
        bias_bound: step,
    })
}
