//! Lévy-measure weights of an integer-valued compound process of order `k`
//! and the superposition sampler built from them.
//!
//! With `q^(n)` the `n`-fold convolution of the jump pmf, the weights are
//! `α_j = (q_j^(1) + ... + q_j^(k)) / k` and the jump intensities
//! `ν_j = kλ α_j`. The process then equals `Σ_j j·Z_j(t)` in distribution,
//! with `Z_j` independent Poisson processes of rate `ν_j`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::law::{JumpLaw, OrderKParams};
use crate::error::{ensure_finite_nonneg, invalid, Error, Result};
use crate::numeric::compensated_sum;

/// Allowed mass of `α` beyond `jmax`.
pub const WEIGHT_TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyMeasureWeights {
    /// `alpha[j - 1] = α_j` for `j = 1..=jmax`.
    pub alpha: Vec<f64>,
    /// `nu[j - 1] = kλ α_j`.
    pub nu: Vec<f64>,
    /// `α_0`, the weight of zero-size jumps, which carry no Lévy mass.
    pub alpha_zero: f64,
    /// `1 - α_0 - Σ_{j ≤ jmax} α_j`, clamped at zero.
    pub tail_mass: f64,
}

impl LevyMeasureWeights {
    pub fn jmax(&self) -> usize {
        self.alpha.len()
    }

    /// `Σ_j ν_j`, the total jump intensity of size at least one.
    pub fn total_intensity(&self) -> f64 {
        compensated_sum(self.nu.iter().copied())
    }
}

fn convolve_truncated(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len.min(a.len() + b.len() - 1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 || i >= out.len() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if i + j >= out.len() {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// Weights up to `jmax`, with the truncated tail mass reported.
pub fn levy_measure_weights(params: &OrderKParams, law: &JumpLaw, jmax: usize) -> Result<LevyMeasureWeights> {
    params.validate()?;
    if jmax == 0 {
        return Err(invalid("jmax", "must be at least 1"));
    }
    let q = law.require_integer_pmf()?;
    let k = params.k as usize;
    let len = jmax + 1;
    let mut acc = vec![0.0; len];
    let mut conv = vec![1.0];
    for _ in 0..k {
        conv = convolve_truncated(&conv, &q, len);
        for (a, c) in acc.iter_mut().zip(&conv) {
            *a += c;
        }
    }
    let alpha_all: Vec<f64> = acc.iter().map(|a| a / k as f64).collect();
    let alpha_zero = alpha_all[0];
    let alpha = alpha_all[1..].to_vec();
    let kept = alpha_zero + compensated_sum(alpha.iter().copied());
    let nu = alpha.iter().map(|a| params.arrival_rate() * a).collect();
    Ok(LevyMeasureWeights {
        alpha,
        nu,
        alpha_zero,
        tail_mass: (1.0 - kept).max(0.0),
    })
}

/// Weights carried to the full support of the `k`-fold convolution.
///
/// A finite pmf with top index `m` gives `α_j = 0` for `j > k·m`, so the
/// truncation is exact up to rounding.
pub fn levy_measure_weights_auto(params: &OrderKParams, law: &JumpLaw) -> Result<LevyMeasureWeights> {
    let q = law.require_integer_pmf()?;
    let top = q.iter().rposition(|&w| w > 0.0).unwrap_or(0);
    let jmax = (params.k as usize * top).max(1);
    let w = levy_measure_weights(params, law, jmax)?;
    if w.tail_mass > WEIGHT_TAIL_TOLERANCE {
        return Err(Error::Truncation {
            tail: w.tail_mass,
            threshold: WEIGHT_TAIL_TOLERANCE,
        });
    }
    Ok(w)
}

/// Sampler for `Σ_j j·Z_j(t)` with `Z_j ~ Poisson(ν_j t)` independent.
#[derive(Debug, Clone)]
pub struct Superposition {
    weights: LevyMeasureWeights,
}

impl Superposition {
    pub fn new(weights: LevyMeasureWeights) -> Result<Self> {
        if weights.tail_mass > WEIGHT_TAIL_TOLERANCE {
            return Err(Error::Truncation {
                tail: weights.tail_mass,
                threshold: WEIGHT_TAIL_TOLERANCE,
            });
        }
        Ok(Self { weights })
    }

    pub fn from_law(params: &OrderKParams, law: &JumpLaw) -> Result<Self> {
        Self::new(levy_measure_weights_auto(params, law)?)
    }

    pub fn weights(&self) -> &LevyMeasureWeights {
        &self.weights
    }

    pub fn sample<R: Rng>(&self, t: f64, rng: &mut R) -> Result<u64> {
        ensure_finite_nonneg("t", t)?;
        if t == 0.0 {
            return Ok(0);
        }
        let mut total = 0u64;
        for (j, nu) in self.weights.nu.iter().enumerate() {
            let mean = nu * t;
            if mean > 0.0 {
                let count = Poisson::new(mean)
                    .map_err(|e| invalid("t", e.to_string()))?
                    .sample(rng) as u64;
                total += (j as u64 + 1) * count;
            }
        }
        Ok(total)
    }
}

/// One draw of the superposition representation at time `t`.
///
/// Builds the weights on every call; use [`Superposition`] for ensembles.
pub fn superposition_sample<R: Rng>(params: &OrderKParams, law: &JumpLaw, t: f64, rng: &mut R) -> Result<u64> {
    Superposition::from_law(params, law)?.sample(t, rng)
}

/// Pgf evaluated through the Lévy weights:
/// `exp[kλt Σ_j α_j (u^j - 1)]`.
pub fn pgf_from_weights(weights: &LevyMeasureWeights, u: f64, t: f64) -> f64 {
    let exponent: f64 = weights
        .nu
        .iter()
        .enumerate()
        .map(|(j, nu)| nu * (u.powi(j as i32 + 1) - 1.0))
        .sum();
    (t * exponent).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderk::moments::cppok_pgf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(k: u32, lambda: f64) -> OrderKParams {
        OrderKParams::new(k, lambda).unwrap()
    }

    #[test]
    fn weights_for_unit_jumps() {
        let dirac = JumpLaw::dirac(1.0).unwrap();
        let w = levy_measure_weights(&p(1, 2.5), &dirac, 4).unwrap();
        assert_eq!(w.alpha, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(w.nu[0], 2.5);

        let w = levy_measure_weights(&p(2, 1.5), &dirac, 3).unwrap();
        assert_eq!(w.alpha, vec![0.5, 0.5, 0.0]);
        assert_eq!(w.nu, vec![1.5, 1.5, 0.0]);
        assert_eq!(w.tail_mass, 0.0);
    }

    #[test]
    fn truncation_reports_tail() {
        let dirac = JumpLaw::dirac(1.0).unwrap();
        let w = levy_measure_weights(&p(3, 1.0), &dirac, 2).unwrap();
        assert!((w.tail_mass - 1.0 / 3.0).abs() < 1e-15);
        assert!(Superposition::new(w).is_err());
    }

    #[test]
    fn weights_reject_continuous_law() {
        let law = JumpLaw::exponential(1.0).unwrap();
        assert!(matches!(levy_measure_weights(&p(2, 1.0), &law, 3), Err(Error::NotDiscrete)));
        assert!(levy_measure_weights(&p(2, 1.0), &JumpLaw::dirac(1.0).unwrap(), 0).is_err());
    }

    #[test]
    fn weights_with_zero_atom_sum_to_one() {
        let law = JumpLaw::discrete(vec![0.3, 0.5, 0.2]).unwrap();
        let w = levy_measure_weights_auto(&p(3, 1.0), &law).unwrap();
        let total = w.alpha_zero + w.alpha.iter().sum::<f64>();
        assert!((total - 1.0).abs() < 1e-14);
        // α_0 = (0.3 + 0.09 + 0.027) / 3
        assert!((w.alpha_zero - 0.417 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn weight_pgf_matches_closed_form() {
        let law = JumpLaw::discrete(vec![0.1, 0.4, 0.0, 0.5]).unwrap();
        let params = p(4, 0.6);
        let w = levy_measure_weights_auto(&params, &law).unwrap();
        for u in [0.0, 0.2, 0.7, 1.0] {
            let a = pgf_from_weights(&w, u, 1.9);
            let b = cppok_pgf(&params, &law, u, 1.9).unwrap();
            assert!((a - b).abs() < 1e-13, "u={u}: {a} vs {b}");
        }
    }

    #[test]
    fn superposition_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dirac = JumpLaw::dirac(1.0).unwrap();
        assert_eq!(superposition_sample(&p(2, 1.0), &dirac, 0.0, &mut rng).unwrap(), 0);
        let sup = Superposition::from_law(&p(1, 2.0), &dirac).unwrap();
        let n = 100_000;
        let mean = (0..n).map(|_| sup.sample(1.5, &mut rng).unwrap() as f64).sum::<f64>() / n as f64;
        assert!((mean - 3.0).abs() < 5.0 * (3.0f64 / n as f64).sqrt());
    }
}
