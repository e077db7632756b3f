use statrs::function::gamma::gamma_lr;

use super::law::{JumpLaw, OrderKParams};
use super::pmf::pok_pmf_auto;
use crate::error::{ensure_finite_nonneg, Error, Result};
use crate::numeric::CompensatedSum;

/// `P[Z(t) ≤ y] = Σ_j p_j(t) · H^{*j}(y)`, truncated by the pmf tail rule.
///
/// Integer laws use exact pmf convolution, exponential jumps the Gamma
/// cdf, point masses a step function. Other continuous laws are rejected;
/// estimate their cdf from samples instead.
pub fn marginal_cdf(params: &OrderKParams, law: &JumpLaw, t: f64, y: f64) -> Result<f64> {
    ensure_finite_nonneg("t", t)?;
    if y.is_nan() {
        return Err(crate::error::invalid("y", "must not be NaN"));
    }
    let counts = pok_pmf_auto(params, t)?;
    let mut acc = CompensatedSum::default();
    match law {
        JumpLaw::Dirac { point } => {
            for (j, p) in counts.probs.iter().enumerate() {
                if j as f64 * point <= y {
                    acc.add(*p);
                }
            }
        }
        JumpLaw::Exponential { rate } => {
            if y < 0.0 {
                return Ok(0.0);
            }
            for (j, p) in counts.probs.iter().enumerate() {
                let h = match (j, y) {
                    (0, _) => 1.0,
                    (_, 0.0) => 0.0,
                    (_, y) if y.is_infinite() => 1.0,
                    _ => gamma_lr(j as f64, rate * y),
                };
                acc.add(p * h);
            }
        }
        JumpLaw::Discrete { pmf } => {
            if y < 0.0 {
                return Ok(0.0);
            }
            if y.is_infinite() {
                return Ok(counts.total_mass().min(1.0));
            }
            let top = y.floor() as usize;
            let q = pmf.weights();
            // conv[m] = P[Y_1 + ... + Y_j = m] for m ≤ top
            let mut conv = vec![0.0; top + 1];
            conv[0] = 1.0;
            for (j, p) in counts.probs.iter().enumerate() {
                if j > 0 {
                    let mut next = vec![0.0; top + 1];
                    for (m, c) in conv.iter().enumerate() {
                        if *c == 0.0 {
                            continue;
                        }
                        for (i, qi) in q.iter().enumerate() {
                            if m + i > top {
                                break;
                            }
                            next[m + i] += c * qi;
                        }
                    }
                    conv = next;
                }
                acc.add(p * conv.iter().sum::<f64>());
            }
        }
        JumpLaw::Custom(c) => {
            return Err(Error::UnsupportedLaw(format!(
                "no closed-form convolution for `{}`; use an empirical cdf",
                c.name()
            )))
        }
    }
    Ok(acc.value().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderk::pmf::pok_pmf;

    fn p(k: u32, lambda: f64) -> OrderKParams {
        OrderKParams::new(k, lambda).unwrap()
    }

    #[test]
    fn limits() {
        for law in [
            JumpLaw::dirac(1.0).unwrap(),
            JumpLaw::exponential(2.0).unwrap(),
            JumpLaw::discrete(vec![0.2, 0.8]).unwrap(),
        ] {
            assert_eq!(marginal_cdf(&p(2, 1.0), &law, 1.0, -0.5).unwrap(), 0.0);
            let hi = marginal_cdf(&p(2, 1.0), &law, 1.0, 1e4).unwrap();
            assert!((hi - 1.0).abs() < 1e-9, "{}", law.describe());
        }
    }

    #[test]
    fn poisson_reduction() {
        let v = marginal_cdf(&p(1, 1.0), &JumpLaw::dirac(1.0).unwrap(), 1.0, 0.5).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn dirac_matches_discrete_unit_pmf() {
        let params = p(3, 0.7);
        let dirac = JumpLaw::dirac(1.0).unwrap();
        let unit = JumpLaw::discrete(vec![0.0, 1.0]).unwrap();
        let table = pok_pmf(&params, 2.0, 12).unwrap();
        let mut cum = 0.0;
        for y in 0..=12 {
            cum += table.probs[y];
            let a = marginal_cdf(&params, &dirac, 2.0, y as f64).unwrap();
            let b = marginal_cdf(&params, &unit, 2.0, y as f64 + 0.5).unwrap();
            assert!((a - cum).abs() < 1e-13);
            assert!((b - cum).abs() < 1e-13);
        }
    }

    #[test]
    fn atom_at_zero_is_handled() {
        // jumps are 0 w.p. 1: Z(t) = 0 surely
        let zero = JumpLaw::discrete(vec![1.0]).unwrap();
        let v = marginal_cdf(&p(2, 1.0), &zero, 3.0, 0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponential_k1_matches_series() {
        // k=1: P[Z ≤ y] = e^{-λt} + Σ_{j≥1} Poisson(j) · GammaCdf(j, μy)
        let v = marginal_cdf(&p(1, 1.0), &JumpLaw::exponential(1.0).unwrap(), 1.0, 0.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        let v = marginal_cdf(&p(1, 1.0), &JumpLaw::exponential(1.0).unwrap(), 1.0, 1.0).unwrap();
        assert!(v > (-1.0f64).exp() && v < 1.0);
    }
}
