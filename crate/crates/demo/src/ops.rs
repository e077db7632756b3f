use cppok::error::{Error, Result};
use cppok::orderk::{cppok_mean, dispersion_report, pok_pmf, sample_cppok_grid};
use cppok::stats::replicate_rng;
use cppok::timechange::{sample_z1, sample_z2, z1_mean, z2_asymptotics};
use cppok::{Clock, JumpLaw, MtssParams, OrderKParams, TimeChangedSpec};

/// Keeps a single click from freezing the page.
pub const MAX_PATHS: usize = 500;
pub const MAX_POINTS: usize = 1000;
pub const MAX_PMF_SUPPORT: usize = 5000;

fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub fn pmf(k: u32, lambda: f64, t: f64, nmax: usize) -> Result<Vec<f64>> {
    if nmax > MAX_PMF_SUPPORT {
        return Err(invalid("nmax", "is limited to 5000"));
    }
    Ok(pok_pmf(&OrderKParams::new(k, lambda)?, t, nmax)?.probs)
}

pub enum Model {
    Cppok(OrderKParams, JumpLaw),
    Z1(TimeChangedSpec),
    Z2(TimeChangedSpec),
}

impl Model {
    /// Exponential jumps; the clock is a single tempered stable component.
    pub fn new(kind: &str, k: u32, lambda: f64, jump_rate: f64, alpha: f64, mu: f64) -> Result<Self> {
        let params = OrderKParams::new(k, lambda)?;
        let law = JumpLaw::exponential(jump_rate)?;
        let clock = || MtssParams::single(alpha, mu);
        Ok(match kind {
            "cppok" => Self::Cppok(params, law),
            "z1" => Self::Z1(TimeChangedSpec::new(params, law, Clock::Mtss(clock()?))?),
            "z2" => Self::Z2(TimeChangedSpec::new(
                params,
                law,
                Clock::InverseMtss {
                    params: clock()?,
                    step: None,
                },
            )?),
            _ => return Err(invalid("kind", "must be cppok, z1 or z2")),
        })
    }
}

fn grid(tmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(tmax > 0.0 && tmax.is_finite()) || points == 0 || points > MAX_POINTS {
        return Err(invalid("grid", "needs tmax > 0 and 1..=1000 points"));
    }
    Ok((1..=points).map(|i| tmax * i as f64 / points as f64).collect())
}

pub fn sample_paths(model: &Model, tmax: f64, points: usize, paths: usize, seed: u64) -> Result<Vec<f64>> {
    if paths == 0 || paths > MAX_PATHS {
        return Err(invalid("paths", "must lie in 1..=500"));
    }
    let grid = grid(tmax, points)?;
    let mut out = Vec::with_capacity(paths * points);
    for i in 0..paths {
        let mut rng = replicate_rng(seed, i as u64);
        let row = match model {
            Model::Cppok(params, law) => sample_cppok_grid(params, law, &grid, &mut rng)?,
            Model::Z1(spec) => {
                let path = sample_z1(spec, &grid, &mut rng)?;
                grid.iter().map(|&t| path.value_at(t)).collect::<Result<_>>()?
            }
            Model::Z2(spec) => {
                let path = sample_z2(spec, &grid, &mut rng)?;
                grid.iter().map(|&t| path.value_at(t)).collect::<Result<_>>()?
            }
        };
        out.extend(row);
    }
    Ok(out)
}

pub fn mean_curve(model: &Model, tmax: f64, points: usize) -> Result<Vec<f64>> {
    grid(tmax, points)?
        .into_iter()
        .map(|t| match model {
            Model::Cppok(params, law) => cppok_mean(params, law, t),
            Model::Z1(spec) => z1_mean(spec, t),
            Model::Z2(spec) => Ok(z2_asymptotics(spec, t)?.mean),
        })
        .collect()
}

pub fn dispersion_gaps(k: u32, lambda: f64, t: f64, rate_min: f64, rate_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(rate_min > 0.0 && rate_max > rate_min) || !(2..=MAX_POINTS).contains(&points) {
        return Err(invalid("rates", "need 0 < rate_min < rate_max and 2..=1000 points"));
    }
    let params = OrderKParams::new(k, lambda)?;
    (0..points)
        .map(|i| {
            let rate = rate_min + (rate_max - rate_min) * i as f64 / (points - 1) as f64;
            Ok(dispersion_report(&params, &JumpLaw::exponential(rate)?, t)?.gap)
        })
        .collect()
}

pub fn threshold_rate(k: u32) -> f64 {
    (2.0 * f64::from(k) + 4.0) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_starts_at_the_empty_probability() {
        let p = pmf(3, 0.5, 2.0, 10).unwrap();
        assert_eq!(p.len(), 11);
        assert!((p[0] - (-3.0f64).exp()).abs() < 1e-15);
        assert!(pmf(3, 0.5, 2.0, MAX_PMF_SUPPORT + 1).is_err());
    }

    #[test]
    fn paths_have_the_requested_shape_and_never_decrease() {
        for kind in ["cppok", "z1", "z2"] {
            let model = Model::new(kind, 2, 1.0, 1.0, 0.6, 1.0).unwrap();
            let out = sample_paths(&model, 5.0, 20, 4, 9).unwrap();
            assert_eq!(out.len(), 80);
            for path in out.chunks(20) {
                assert!(path.windows(2).all(|w| w[1] >= w[0]), "{kind}");
            }
            assert_eq!(out, sample_paths(&model, 5.0, 20, 4, 9).unwrap());
            assert_eq!(mean_curve(&model, 5.0, 20).unwrap().len(), 20);
        }
        assert!(Model::new("z3", 2, 1.0, 1.0, 0.6, 1.0).is_err());
    }

    #[test]
    fn gap_changes_sign_at_the_threshold() {
        let rate = threshold_rate(2);
        let gaps = dispersion_gaps(2, 1.0, 1.0, rate - 1.0, rate + 1.0, 3).unwrap();
        assert!(gaps[0] > 0.0);
        assert!(gaps[1].abs() < 1e-12);
        assert!(gaps[2] < 0.0);
    }
}
