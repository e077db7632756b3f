use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};
use serde::{Deserialize, Serialize};

use super::law::{JumpLaw, OrderKParams};
use crate::error::{ensure_finite_nonneg, ensure_positive, invalid, Error, Result};

/// One trajectory stored as jump epochs and the value after each jump.
///
/// The process starts at 0 and is right-continuous and piecewise constant,
/// so [`ProcessPath::value_at`] is exact for every `t` in `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub horizon: f64,
}

impl ProcessPath {
    pub fn new(times: Vec<f64>, values: Vec<f64>, horizon: f64) -> Result<Self> {
        ensure_positive("horizon", horizon)?;
        if times.len() != values.len() {
            return Err(invalid("values", "must have the same length as times"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("times", "must be strictly increasing"));
        }
        if times.first().is_some_and(|&t| t < 0.0) || times.last().is_some_and(|&t| t > horizon) {
            return Err(invalid("times", "must lie in [0, horizon]"));
        }
        Ok(Self {
            times,
            values,
            horizon,
        })
    }

    /// Value at `t` by right-continuous step lookup.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(invalid("t", format!("must be non-negative, got {t}")));
        }
        if t > self.horizon {
            return Err(Error::BeyondHorizon {
                t,
                horizon: self.horizon,
            });
        }
        let idx = self.times.partition_point(|&s| s <= t);
        Ok(if idx == 0 { 0.0 } else { self.values[idx - 1] })
    }

    pub fn terminal(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn event_count(&self) -> usize {
        self.times.len()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.first().is_none_or(|&v| v >= 0.0) && self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Event epochs of a Poisson process of rate `rate` on `[0, horizon]`.
fn poisson_epochs<R: Rng>(rate: f64, horizon: f64, rng: &mut R) -> Vec<f64> {
    let gap = Exp::new(rate).unwrap();
    let mut times = Vec::new();
    let mut t = gap.sample(rng);
    while t <= horizon {
        times.push(t);
        t += gap.sample(rng);
    }
    times
}

/// Path of the Poisson process of order `k`: arrivals at rate `kλ`, each
/// adding an independent batch uniform on `{1, ..., k}`.
pub fn sample_ppok_path<R: Rng>(
    params: &OrderKParams,
    horizon: f64,
    rng: &mut R,
) -> Result<ProcessPath> {
    params.validate()?;
    ensure_positive("horizon", horizon)?;
    let times = poisson_epochs(params.arrival_rate(), horizon, rng);
    let mut level = 0.0;
    let values = times
        .iter()
        .map(|_| {
            level += f64::from(rng.random_range(1..=params.k));
            level
        })
        .collect();
    Ok(ProcessPath {
        times,
        values,
        horizon,
    })
}

/// Path of the compound Poisson process of order `k`.
///
/// Each arrival of the driving process brings a batch of `X ~ U{1..k}` units
/// and every unit carries its own jump `Y ~ H`, so the path jumps by
/// `Y_1 + ... + Y_X` at that epoch.
pub fn sample_cppok_path<R: Rng>(
    params: &OrderKParams,
    law: &JumpLaw,
    horizon: f64,
    rng: &mut R,
) -> Result<ProcessPath> {
    params.validate()?;
    ensure_positive("horizon", horizon)?;
    let times = poisson_epochs(params.arrival_rate(), horizon, rng);
    let mut level = 0.0;
    let values = times
        .iter()
        .map(|_| {
            let batch = rng.random_range(1..=params.k);
            level += law.sample_sum(u64::from(batch), rng);
            level
        })
        .collect();
    Ok(ProcessPath {
        times,
        values,
        horizon,
    })
}

/// Number of unit arrivals `N^(k)(dt)` over an interval of length `dt`.
///
/// Marking the rate-`kλ` arrivals by their uniform batch size splits them
/// into `k` independent Poisson streams of rate `λ`, so the count is
/// `Σ_i i·P_i` with `P_i ~ Poisson(λ dt)`. Cost is `O(k)` for any `dt`.
pub fn sample_order_k_count<R: Rng>(params: &OrderKParams, dt: f64, rng: &mut R) -> Result<u64> {
    ensure_finite_nonneg("dt", dt)?;
    let mean = params.lambda * dt;
    if mean == 0.0 {
        return Ok(0);
    }
    let stream = Poisson::new(mean).map_err(|e| invalid("dt", e.to_string()))?;
    Ok((1..=u64::from(params.k))
        .map(|i| i * stream.sample(rng) as u64)
        .sum())
}

/// Largest jump count summed one draw at a time in an increment.
pub const MAX_LOOPED_JUMPS: u64 = 100_000_000;

/// Increment `Z(t + dt) - Z(t)` of the compound process, sampled directly.
pub fn sample_cppok_increment<R: Rng>(
    params: &OrderKParams,
    law: &JumpLaw,
    dt: f64,
    rng: &mut R,
) -> Result<f64> {
    let n = sample_order_k_count(params, dt, rng)?;
    let closed_form = matches!(law, JumpLaw::Dirac { .. } | JumpLaw::Exponential { .. });
    if !closed_form && n > MAX_LOOPED_JUMPS {
        return Err(Error::Budget(format!(
            "{n} jumps over an interval of length {dt} exceeds {MAX_LOOPED_JUMPS}"
        )));
    }
    Ok(law.sample_sum(n, rng))
}

/// Values of the compound process at the increasing times `grid`, built from
/// independent increments.
pub fn sample_cppok_grid<R: Rng>(
    params: &OrderKParams,
    law: &JumpLaw,
    grid: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>> {
    params.validate()?;
    let mut prev = 0.0;
    let mut level = 0.0;
    grid.iter()
        .map(|&t| {
            if !(t >= prev) {
                return Err(invalid("grid", "must be non-negative and non-decreasing"));
            }
            level += sample_cppok_increment(params, law, t - prev, rng)?;
            prev = t;
            Ok(level)
        })
        .collect()
}

/// Compensator `k(k+1)/2 · λ t · E[Y]`.
pub fn compensator(params: &OrderKParams, law: &JumpLaw, t: f64) -> f64 {
    params.first_factor() * params.lambda * t * law.mean()
}

/// `M(t) = Z(t) - k(k+1)/2 · λ t · E[Y]` along a sampled path.
pub fn martingale_residual(
    path: &ProcessPath,
    params: &OrderKParams,
    law: &JumpLaw,
    t: f64,
) -> Result<f64> {
    Ok(path.value_at(t)? - compensator(params, law, t))
}
