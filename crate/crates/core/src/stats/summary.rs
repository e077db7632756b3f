use serde::{Deserialize, Serialize};

use crate::numeric::compensated_sum;

/// Moments of one sample with the standard errors of the estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarSummary {
    pub n: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub stderr_mean: f64,
    /// `sqrt((m4 - s⁴) / n)` with `m4` the fourth central moment.
    pub stderr_variance: f64,
}

fn mean(xs: &[f64]) -> f64 {
    compensated_sum(xs.iter().copied()) / xs.len() as f64
}

pub fn scalar_summary(xs: &[f64]) -> ScalarSummary {
    let n = xs.len();
    if n == 0 {
        return ScalarSummary {
            n: 0,
            mean: f64::NAN,
            variance: f64::NAN,
            stderr_mean: f64::NAN,
            stderr_variance: f64::NAN,
        };
    }
    let m = mean(xs);
    let nf = n as f64;
    let m2 = compensated_sum(xs.iter().map(|x| (x - m).powi(2)));
    let m4 = compensated_sum(xs.iter().map(|x| (x - m).powi(4))) / nf;
    let variance = if n > 1 { m2 / (nf - 1.0) } else { 0.0 };
    ScalarSummary {
        n: n as u64,
        mean: m,
        variance,
        stderr_mean: (variance / nf).sqrt(),
        stderr_variance: ((m4 - variance * variance).max(0.0) / nf).sqrt(),
    }
}

/// Unbiased sample covariance and its standard error
/// `sqrt(Var[(X - x̄)(Y - ȳ)] / n)`.
pub fn covariance_estimate(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len(), "samples must be paired");
    let n = xs.len();
    if n < 2 {
        return (0.0, f64::NAN);
    }
    let (mx, my) = (mean(xs), mean(ys));
    let products: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let nf = n as f64;
    let cov = compensated_sum(products.iter().copied()) / (nf - 1.0);
    let pm = compensated_sum(products.iter().copied()) / nf;
    let pv = compensated_sum(products.iter().map(|p| (p - pm).powi(2))) / (nf - 1.0);
    (cov, (pv / nf).sqrt())
}

/// Per-time moments and the covariance matrix of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub stderr_mean: Vec<f64>,
    pub stderr_variance: Vec<f64>,
    /// Symmetric, with `covariance[j][j] = variance[j]`.
    pub covariance: Vec<Vec<f64>>,
    pub stderr_covariance: Vec<Vec<f64>>,
    pub replicates: u64,
    pub seed: u64,
}

impl EnsembleSummary {
    pub(crate) fn from_columns(grid: &[f64], columns: &[Vec<f64>], seed: u64) -> Self {
        let g = grid.len();
        let scalars: Vec<ScalarSummary> = columns.iter().map(|c| scalar_summary(c)).collect();
        let mut covariance = vec![vec![0.0; g]; g];
        let mut stderr_covariance = vec![vec![0.0; g]; g];
        for i in 0..g {
            covariance[i][i] = scalars[i].variance;
            stderr_covariance[i][i] = scalars[i].stderr_variance;
            for j in i + 1..g {
                let (c, se) = covariance_estimate(&columns[i], &columns[j]);
                covariance[i][j] = c;
                covariance[j][i] = c;
                stderr_covariance[i][j] = se;
                stderr_covariance[j][i] = se;
            }
        }
        Self {
            grid: grid.to_vec(),
            mean: scalars.iter().map(|s| s.mean).collect(),
            variance: scalars.iter().map(|s| s.variance).collect(),
            stderr_mean: scalars.iter().map(|s| s.stderr_mean).collect(),
            stderr_variance: scalars.iter().map(|s| s.stderr_variance).collect(),
            covariance,
            stderr_covariance,
            replicates: columns.first().map_or(0, |c| c.len() as u64),
            seed,
        }
    }

    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.grid.iter().position(|&g| g == t)
    }

    /// Sample correlation between grid times `i` and `j`.
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        self.covariance[i][j] / (self.variance[i] * self.variance[j]).sqrt()
    }
}
