use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01};
use serde::{Deserialize, Serialize};

use super::MtssParams;
use crate::error::{ensure_finite_nonneg, invalid, Result};

/// Positive `α`-stable variate with `E[e^{-sX}] = e^{-dt·s^α}`.
///
/// Uses Kanter's representation: for `U ~ U(0, π)` and `W ~ Exp(1)`,
///
/// ```text
/// X₁ = sin(αU) / sin(U)^{1/α} · (sin((1-α)U) / W)^{(1-α)/α}
/// ```
///
/// has exponent `s^α`, and `X = dt^{1/α} X₁`.
///
/// # Panics
///
/// If `alpha` is outside `(0, 1)` or `dt` is not positive.
pub fn sample_stable_increment<R: Rng>(alpha: f64, dt: f64, rng: &mut R) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    assert!(dt > 0.0 && dt.is_finite(), "dt must be positive");
    loop {
        let u01: f64 = Open01.sample(rng);
        let u = PI * u01;
        let w: f64 = Exp1.sample(rng);
        let x = (alpha * u).sin() / u.sin().powf(1.0 / alpha)
            * (((1.0 - alpha) * u).sin() / w).powf((1.0 - alpha) / alpha);
        let x = dt.powf(1.0 / alpha) * x;
        // Underflow to 0 or overflow to inf is possible at extreme α; redraw.
        if x > 0.0 && x.is_finite() {
            return x;
        }
    }
}

/// Tempered stable variate with exponent `dt·c·((s+μ)^α - μ^α)`.
///
/// A stable variate `X` with exponent `dt·c·s^α` is accepted with
/// probability `e^{-μX}`, which tilts its law exactly to the tempered one.
/// The acceptance rate is `e^{-dt·c·μ^α}`, so the interval is split into
/// pieces with `dt_piece·c·μ^α ≤ 1` and the accepted pieces are summed.
///
/// # Panics
///
/// On `alpha ∉ (0,1)`, `mu < 0`, or non-positive `dt`/`weight_c`.
pub fn sample_tempered_stable_increment<R: Rng>(alpha: f64, mu: f64, weight_c: f64, dt: f64, rng: &mut R) -> f64 {
    assert!(mu >= 0.0 && mu.is_finite(), "mu must be non-negative");
    assert!(weight_c > 0.0 && weight_c.is_finite(), "weight_c must be positive");
    assert!(dt > 0.0 && dt.is_finite(), "dt must be positive");
    if mu == 0.0 {
        return sample_stable_increment(alpha, dt * weight_c, rng);
    }
    let load = dt * weight_c * mu.powf(alpha);
    let pieces = load.ceil().max(1.0);
    let piece_scale = dt * weight_c / pieces;
    let mut total = 0.0;
    for _ in 0..pieces as u64 {
        loop {
            let x = sample_stable_increment(alpha, piece_scale, rng);
            let u: f64 = rng.random();
            if u < (-mu * x).exp() {
                total += x;
                break;
            }
        }
    }
    total
}

impl MtssParams {
    /// Increment `S(t + dt) - S(t)`, the sum of independent component draws.
    pub fn sample_increment<R: Rng>(&self, dt: f64, rng: &mut R) -> f64 {
        if dt <= 0.0 {
            return 0.0;
        }
        self.components()
            .map(|c| sample_tempered_stable_increment(c.alpha, c.mu, c.weight, dt, rng))
            .sum()
    }
}

/// Values of the subordinator at an increasing grid of operational times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorPath {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub params: MtssParams,
}

/// Samples `S` on `grid` from `S(0) = 0` using independent increments.
pub fn sample_mtss_path<R: Rng>(params: &MtssParams, grid: &[f64], rng: &mut R) -> Result<SubordinatorPath> {
    params.validate()?;
    check_grid(grid)?;
    let mut prev_t = 0.0;
    let mut level = 0.0;
    let values = grid
        .iter()
        .map(|&t| {
            level += params.sample_increment(t - prev_t, rng);
            prev_t = t;
            level
        })
        .collect();
    Ok(SubordinatorPath {
        grid: grid.to_vec(),
        values,
        params: *params,
    })
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("grid", "must not be empty"));
    }
    ensure_finite_nonneg("grid", grid[0])?;
    if grid.windows(2).any(|w| !(w[0] < w[1])) || !grid.last().unwrap().is_finite() {
        return Err(invalid("grid", "must be strictly increasing and finite"));
    }
    Ok(())
}
