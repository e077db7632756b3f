use serde::{Deserialize, Serialize};

use super::law::{JumpLaw, OrderKParams};
use crate::error::{ensure_finite_nonneg, invalid, Error, Result};

/// Absolute tolerance under which a dispersion gap counts as zero.
pub const EQUIDISPERSION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersionClass {
    Over,
    Under,
    Equi,
}

impl DispersionClass {
    pub fn from_gap(gap: f64, tolerance: f64) -> Self {
        if gap.abs() < tolerance {
            Self::Equi
        } else if gap > 0.0 {
            Self::Over
        } else {
            Self::Under
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Over => "over",
            Self::Under => "under",
            Self::Equi => "equi",
        }
    }
}

impl std::fmt::Display for DispersionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_law(law: &JumpLaw) -> Result<()> {
    if !(law.mean().is_finite() && law.second_moment().is_finite()) {
        return Err(Error::InfiniteMoment("jump second moment"));
    }
    Ok(())
}

/// `E[Z(t)] = k(k+1)/2 · λ t · E[Y]`.
pub fn cppok_mean(params: &OrderKParams, law: &JumpLaw, t: f64) -> Result<f64> {
    params.validate()?;
    ensure_finite_nonneg("t", t)?;
    check_law(law)?;
    Ok(params.first_factor() * params.lambda * t * law.mean())
}

/// `Var[Z(t)] = k(k+1)/2 · λ t · Var(Y) + k(k+1)(2k+1)/6 · λ t · E[Y]²`.
pub fn cppok_variance(params: &OrderKParams, law: &JumpLaw, t: f64) -> Result<f64> {
    params.validate()?;
    ensure_finite_nonneg("t", t)?;
    check_law(law)?;
    let lt = params.lambda * t;
    Ok(params.first_factor() * lt * law.variance() + params.second_factor() * lt * law.mean().powi(2))
}

/// `Cov[Z(s), Z(t)] = Var[Z(min(s, t))]` by independent increments.
pub fn cppok_covariance(params: &OrderKParams, law: &JumpLaw, s: f64, t: f64) -> Result<f64> {
    ensure_finite_nonneg("s", s)?;
    ensure_finite_nonneg("t", t)?;
    cppok_variance(params, law, s.min(t))
}

/// `Corr[Z(s), Z(t)] = sqrt(s / t)` for `0 < s ≤ t`, a power law in `t`
/// with exponent `-1/2`.
pub fn cppok_correlation(params: &OrderKParams, law: &JumpLaw, s: f64, t: f64) -> Result<f64> {
    let (lo, hi) = (s.min(t), s.max(t));
    if !(lo > 0.0) {
        return Err(invalid("s", "correlation needs both times positive"));
    }
    let cov = cppok_covariance(params, law, lo, hi)?;
    Ok(cov / (cppok_variance(params, law, lo)? * cppok_variance(params, law, hi)?).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    /// `Var[Z(t)] - E[Z(t)]`.
    pub gap: f64,
    pub class: DispersionClass,
    pub mean: f64,
    pub variance: f64,
    /// `Var/E`, undefined (NaN) when the mean vanishes.
    pub index: f64,
}

/// Sign of `Var[Z(t)] - E[Z(t)]` from the exact moment formulas.
///
/// The gap is evaluated in factored form
/// `k(k+1)/2 · λt · [Var(Y) - E(Y) + (2k+1)/3 · E(Y)²]` so that a boundary
/// case such as exponential jumps with rate `(2k+4)/3` lands on zero.
pub fn dispersion_report(params: &OrderKParams, law: &JumpLaw, t: f64) -> Result<DispersionReport> {
    ensure_finite_nonneg("t", t)?;
    if t == 0.0 {
        return Err(invalid("t", "index of dispersion is undefined at t = 0"));
    }
    let mean = cppok_mean(params, law, t)?;
    let variance = cppok_variance(params, law, t)?;
    let k = f64::from(params.k);
    let bracket = law.variance() - law.mean() + (2.0 * k + 1.0) / 3.0 * law.mean().powi(2);
    let gap = params.first_factor() * params.lambda * t * bracket;
    Ok(DispersionReport {
        gap,
        class: DispersionClass::from_gap(gap, EQUIDISPERSION_TOLERANCE),
        mean,
        variance,
        index: variance / mean,
    })
}

/// Pgf `G_Y(u) = Σ q_n u^n` of an integer jump law.
pub fn jump_pgf(pmf: &[f64], u: f64) -> f64 {
    // Horner from the top coefficient.
    pmf.iter().rev().fold(0.0, |acc, q| acc * u + q)
}

/// `E[u^{Z(t)}] = exp[λt (G_Y(u) + ... + G_Y(u)^k) - kλt]`.
pub fn cppok_pgf(params: &OrderKParams, law: &JumpLaw, u: f64, t: f64) -> Result<f64> {
    params.validate()?;
    ensure_finite_nonneg("t", t)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(invalid("u", format!("must lie in [0, 1], got {u}")));
    }
    let pmf = law.require_integer_pmf()?;
    let g = jump_pgf(&pmf, u);
    let mut power = 1.0;
    let mut series = 0.0;
    for _ in 0..params.k {
        power *= g;
        series += power;
    }
    let lt = params.lambda * t;
    Ok((lt * series - params.arrival_rate() * t).exp())
}
