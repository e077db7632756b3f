use serde::{Deserialize, Serialize};

use super::summary::scalar_summary;
use super::Ensemble;
use crate::error::Result;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.5758293035489004;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementInterval {
    pub s: f64,
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
    pub lower: f64,
    pub upper: f64,
    pub contains_zero: bool,
}

/// 99% confidence intervals for `E[M(t) - M(s)]`, where
/// `M(t) = X(t) - compensator(t)` and `X` is the ensemble's process.
pub fn martingale_increment_test(
    ensemble: &Ensemble,
    pairs: &[(f64, f64)],
    compensator: impl Fn(f64) -> f64,
) -> Result<Vec<IncrementInterval>> {
    pairs
        .iter()
        .map(|&(s, t)| {
            let (xs, xt) = (ensemble.column_at(s)?, ensemble.column_at(t)?);
            let drift = compensator(t) - compensator(s);
            let inc: Vec<f64> = xs.iter().zip(xt).map(|(a, b)| b - a - drift).collect();
            let summary = scalar_summary(&inc);
            let half = Z_99 * summary.stderr_mean;
            let (lower, upper) = (summary.mean - half, summary.mean + half);
            Ok(IncrementInterval {
                s,
                t,
                mean: summary.mean,
                stderr: summary.stderr_mean,
                lower,
                upper,
                contains_zero: lower <= 0.0 && 0.0 <= upper,
            })
        })
        .collect()
}
