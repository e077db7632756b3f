use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sampling::{check_grid, SubordinatorPath};
use super::MtssParams;
use crate::error::{ensure_positive, Error, Result};

/// Upper bound on operational steps simulated for one inverse path.
pub const MAX_OPERATIONAL_STEPS: u64 = 200_000_000;

/// First-passage times `E(t) = inf{r : S(r) > t}` at physical times `grid`.
///
/// Values are computed on an operational lattice `{0, step, 2·step, ...}`
/// with the right-endpoint rule, so each value over-estimates the exact
/// first passage by less than `bias_bound = step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversePath {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub bias_bound: f64,
}

/// Slope `1 / (c1 α1 μ1^{α1-1} + c2 α2 μ2^{α2-1})` of `E[E(t)]` for large `t`.
pub fn inverse_mean_asymptote(params: &MtssParams) -> Result<f64> {
    params.validate()?;
    Ok(1.0 / params.mean_rate()?)
}

/// Step no larger than 1% of the asymptotic mean first passage at `tmax`.
pub fn default_inverse_step(params: &MtssParams, tmax: f64) -> Result<f64> {
    ensure_positive("tmax", tmax)?;
    let expected = tmax * inverse_mean_asymptote(params)?;
    Ok(0.01 * expected)
}

/// Samples an inverse path on `tgrid`.
pub fn sample_inverse_path<R: Rng>(params: &MtssParams, tgrid: &[f64], step: f64, rng: &mut R) -> Result<InversePath> {
    sample_inverse_path_traced(params, tgrid, step, rng).map(|(inv, _)| inv)
}

/// As [`sample_inverse_path`], also returning the subordinator on the
/// operational lattice up to the first point above `max(tgrid)`.
pub fn sample_inverse_path_traced<R: Rng>(
    params: &MtssParams,
    tgrid: &[f64],
    step: f64,
    rng: &mut R,
) -> Result<(InversePath, SubordinatorPath)> {
    params.validate()?;
    check_grid(tgrid)?;
    ensure_positive("step", step)?;
    let tmax = *tgrid.last().unwrap();

    let mut op_grid = vec![0.0];
    let mut levels = vec![0.0];
    let mut values = Vec::with_capacity(tgrid.len());
    let mut next = 0usize;
    let mut j: u64 = 0;
    let mut level = 0.0;
    // S(0) = 0 never exceeds t ≥ 0, so the first candidate is r = step.
    while next < tgrid.len() {
        if j >= MAX_OPERATIONAL_STEPS {
            return Err(Error::Budget(format!(
                "subordinator stayed below {tmax} for {MAX_OPERATIONAL_STEPS} steps of {step}"
            )));
        }
        j += 1;
        level += params.sample_increment(step, rng);
        let r = j as f64 * step;
        op_grid.push(r);
        levels.push(level);
        while next < tgrid.len() && level > tgrid[next] {
            values.push(r);
            next += 1;
        }
    }
    Ok((
        InversePath {
            grid: tgrid.to_vec(),
            values,
            bias_bound: step,
        },
        SubordinatorPath {
            grid: op_grid,
            values: levels,
            params: *params,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn asymptote_examples() {
        assert_eq!(inverse_mean_asymptote(&MtssParams::single(0.5, 1.0).unwrap()).unwrap(), 2.0);
        let sym = MtssParams::new(0.5, 0.5, 0.5, 0.5, 1.0, 1.0).unwrap();
        assert_eq!(inverse_mean_asymptote(&sym).unwrap(), 2.0);
        assert!(inverse_mean_asymptote(&MtssParams::stable(0.5).unwrap()).is_err());
    }

    #[test]
    fn inverse_is_monotone_and_consistent() {
        let p = MtssParams::new(0.6, 0.4, 0.5, 0.7, 1.0, 2.0).unwrap();
        let tgrid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let step = 0.05;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let (inv, sub) = sample_inverse_path_traced(&p, &tgrid, step, &mut rng).unwrap();
            assert_eq!(inv.bias_bound, step);
            assert!(inv.values.windows(2).all(|w| w[0] <= w[1]));
            // E(0) is the first lattice point, S(step) > 0.
            assert_eq!(inv.values[0], step);
            for (t, e) in inv.grid.iter().zip(&inv.values) {
                let j = (e / step).round() as usize;
                assert!(sub.values[j - 1] <= *t && *t < sub.values[j]);
            }
        }
    }

    #[test]
    fn rejects_bad_step_and_grid() {
        let p = MtssParams::single(0.5, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        assert!(sample_inverse_path(&p, &[0.0, 1.0], 0.0, &mut rng).is_err());
        assert!(sample_inverse_path(&p, &[1.0, 0.5], 0.1, &mut rng).is_err());
    }

    #[test]
    fn default_step_scales_with_horizon() {
        let p = MtssParams::single(0.5, 1.0).unwrap();
        assert!((default_inverse_step(&p, 50.0).unwrap() - 1.0).abs() < 1e-12);
    }
}
