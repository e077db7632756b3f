use serde::{Deserialize, Serialize};

use super::TimeChangedSpec;
use crate::error::{ensure_finite_nonneg, invalid, Error, Result};
use crate::orderk::{cppok_mean, cppok_variance, jump_pgf, DispersionClass, OrderKParams, EQUIDISPERSION_TOLERANCE};

/// `(E[Z(1)], Var[Z(1)])` of the base process.
fn unit_moments(spec: &TimeChangedSpec) -> Result<(f64, f64)> {
    Ok((cppok_mean(&spec.base, &spec.law, 1.0)?, cppok_variance(&spec.base, &spec.law, 1.0)?))
}

/// `E[Z1(t)] = k(k+1)/2 · λ · E[Y] · E[S(t)]`.
pub fn z1_mean(spec: &TimeChangedSpec, t: f64) -> Result<f64> {
    let clock = spec.mtss()?;
    let (mz, _) = unit_moments(spec)?;
    Ok(mz * clock.mean(t)?)
}

/// `Cov[Z1(s), Z1(t)] = E[Z(1)]² Var[S(s)] + E[S(s)] Var[Z(1)]` for `s ≤ t`.
///
/// The arguments may be given in either order; the smaller one plays `s`.
pub fn z1_cov(spec: &TimeChangedSpec, s: f64, t: f64) -> Result<f64> {
    let clock = spec.mtss()?;
    ensure_finite_nonneg("t", t)?;
    let s = s.min(t);
    let (mz, vz) = unit_moments(spec)?;
    Ok(mz * mz * clock.variance(s)? + clock.mean(s)? * vz)
}

pub fn z1_variance(spec: &TimeChangedSpec, t: f64) -> Result<f64> {
    z1_cov(spec, t, t)
}

/// `Corr[Z1(s), Z1(t)]`; both times must be positive.
pub fn z1_correlation(spec: &TimeChangedSpec, s: f64, t: f64) -> Result<f64> {
    if !(s.min(t) > 0.0) {
        return Err(invalid("s", "correlation needs both times positive"));
    }
    Ok(z1_cov(spec, s, t)? / (z1_variance(spec, s)? * z1_variance(spec, t)?).sqrt())
}

/// Terms of `Var[Z1(t)] - E[Z1(t)] = E[Z(1)]² Var[S(t)] + E[S(t)] (Var[Z(1)] - E[Z(1)])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Z1Dispersion {
    pub gap: f64,
    pub class: DispersionClass,
    /// Dispersion of `Z(1)`. When it is `Over` or `Equi` the time-changed
    /// process is always overdispersed; when `Under` either class can occur.
    pub base_class: DispersionClass,
    pub mean_s: f64,
    pub var_s: f64,
    pub mean_z1: f64,
    pub var_z1: f64,
}

pub fn z1_dispersion_classify(spec: &TimeChangedSpec, t: f64) -> Result<Z1Dispersion> {
    let clock = spec.mtss()?;
    if t == 0.0 {
        return Err(invalid("t", "index of dispersion is undefined at t = 0"));
    }
    let (mean_z1, var_z1) = unit_moments(spec)?;
    let (mean_s, var_s) = (clock.mean(t)?, clock.variance(t)?);
    let base_gap = var_z1 - mean_z1;
    let gap = mean_z1 * mean_z1 * var_s + mean_s * base_gap;
    Ok(Z1Dispersion {
        gap,
        class: DispersionClass::from_gap(gap, EQUIDISPERSION_TOLERANCE),
        base_class: DispersionClass::from_gap(base_gap, EQUIDISPERSION_TOLERANCE),
        mean_s,
        var_s,
        mean_z1,
        var_z1,
    })
}

/// `Corr[Z1(s), Z1(t)] ~ c(s) t^exponent` as `t → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrdStructure {
    pub exponent: f64,
    /// `K = (c1 α1 μ1^{α1-1} + c2 α2 μ2^{α2-1}) · Var[Z(1)]`, the `E[S(t)] Var[Z(1)]`
    /// part of the variance slope.
    pub constant: f64,
    /// Exact slope of `Var[Z1(t)]`: `K + E[Z(1)]² Var[S(1)]`.
    pub variance_slope: f64,
}

pub fn z1_lrd_exponent(spec: &TimeChangedSpec) -> Result<LrdStructure> {
    let clock = spec.mtss()?;
    let (mz, vz) = unit_moments(spec)?;
    let constant = clock.mean_rate()? * vz;
    Ok(LrdStructure {
        exponent: -0.5,
        constant,
        variance_slope: constant + mz * mz * clock.variance_rate()?,
    })
}

/// `ψ(u) = kλ - λ Σ_{i=1}^k G_Y(u)^i`, the Laplace exponent of `Z` in pgf form.
fn pgf_exponent(params: &OrderKParams, g: f64) -> f64 {
    let mut power = 1.0;
    let mut series = 0.0;
    for _ in 0..params.k {
        power *= g;
        series += power;
    }
    params.lambda * (f64::from(params.k) - series)
}

/// `E[u^{Z1(t)}] = exp(-t f(ψ(u)))` for integer jumps.
///
/// Valid for every clock including the untempered stable one.
pub fn z1_pgf(spec: &TimeChangedSpec, u: f64, t: f64) -> Result<f64> {
    let clock = spec.mtss()?;
    ensure_finite_nonneg("t", t)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(invalid("u", format!("must lie in [0, 1], got {u}")));
    }
    let pmf = spec.law.require_integer_pmf()?;
    let psi = pgf_exponent(&spec.base, jump_pgf(&pmf, u)).max(0.0);
    Ok((-t * clock.laplace_exponent(psi)?).exp())
}

/// `E[u^{N(S_α(t))}] = exp(-t (λ(k - Σ_{j=1}^k u^j))^α)` for the order-`k`
/// count run on an `α`-stable clock.
pub fn space_fractional_pgf(params: &OrderKParams, alpha: f64, u: f64, t: f64) -> Result<f64> {
    params.validate()?;
    ensure_finite_nonneg("t", t)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(invalid("u", format!("must lie in [0, 1], got {u}")));
    }
    Ok((-t * pgf_exponent(params, u).max(0.0).powf(alpha)).exp())
}

/// Monte Carlo moments of the inverse subordinator on a fixed grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseMoments {
    pub grid: Vec<f64>,
    pub mean: Vec<f64>,
    /// `covariance[i][j] = Cov[E(grid[i]), E(grid[j])]`.
    pub covariance: Vec<Vec<f64>>,
    pub stderr_mean: Vec<f64>,
    pub replicates: u64,
    /// Upper bound on the upward bias of each simulated `E(t)`.
    pub bias_bound: f64,
}

impl InverseMoments {
    /// Index of `t` in the grid; only exact grid times are accepted.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        self.grid
            .iter()
            .position(|&g| g == t)
            .ok_or(Error::Missing("inverse moments at the requested time"))
    }

    pub fn mean_at(&self, t: f64) -> Result<f64> {
        Ok(self.mean[self.index_of(t)?])
    }

    pub fn cov_at(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.covariance[self.index_of(s)?][self.index_of(t)?])
    }
}

/// `E[Z2(t)] = k(k+1)/2 · λ · E[Y] · E[E(t)]`.
pub fn z2_mean(spec: &TimeChangedSpec, t: f64, inverse: &InverseMoments) -> Result<f64> {
    spec.inverse()?;
    let (mz, _) = unit_moments(spec)?;
    Ok(mz * inverse.mean_at(t)?)
}

/// `Cov[Z2(s), Z2(t)] = Var[Z(1)] E[E(s)] + E[Z(1)]² Cov[E(s), E(t)]` for `s ≤ t`.
pub fn z2_cov(spec: &TimeChangedSpec, s: f64, t: f64, inverse: &InverseMoments) -> Result<f64> {
    spec.inverse()?;
    let (mz, vz) = unit_moments(spec)?;
    Ok(vz * inverse.mean_at(s.min(t))? + mz * mz * inverse.cov_at(s, t)?)
}

pub fn z2_variance(spec: &TimeChangedSpec, t: f64, inverse: &InverseMoments) -> Result<f64> {
    z2_cov(spec, t, t, inverse)
}

/// Large-`t` mean and variance of `Z2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Z2Asymptotics {
    pub mean: f64,
    pub variance: f64,
}

/// `E[Z2(t)] ~ E[Z(1)] t / m` and `Var[Z2(t)] ~ Var[Z(1)] t / m`, where
/// `m = c1 α1 μ1^{α1-1} + c2 α2 μ2^{α2-1}` and
/// `Var[Z(1)] = k(k+1)/2 · λ [Var(Y) + (2k+1)/3 · E[Y]²]`.
///
/// The variance keeps only the `Var[Z(1)] E[E(t)]` part of the covariance;
/// see [`z2_variance_slope_renewal`] for the slope that includes the
/// fluctuation of the clock.
pub fn z2_asymptotics(spec: &TimeChangedSpec, t: f64) -> Result<Z2Asymptotics> {
    let (clock, _) = spec.inverse()?;
    ensure_finite_nonneg("t", t)?;
    let (mz, vz) = unit_moments(spec)?;
    let m = clock.mean_rate()?;
    Ok(Z2Asymptotics {
        mean: mz * t / m,
        variance: vz * t / m,
    })
}

/// Slope of `Var[Z2(t)]` from the renewal limit `Var[E(t)] ~ σ² t / m³`:
/// `Var[Z(1)] / m + E[Z(1)]² σ² / m³`, with `σ² = Var[S(1)]`.
pub fn z2_variance_slope_renewal(spec: &TimeChangedSpec) -> Result<f64> {
    let (clock, _) = spec.inverse()?;
    let (mz, vz) = unit_moments(spec)?;
    let m = clock.mean_rate()?;
    Ok(vz / m + mz * mz * clock.variance_rate()? / m.powi(3))
}

#[cfg(test)]
mod tests {
    use super::super::Clock;
    use super::*;
    use crate::orderk::JumpLaw;
    use crate::subordinators::MtssParams;

    fn spec(k: u32, lambda: f64, law: JumpLaw, clock: Clock) -> TimeChangedSpec {
        TimeChangedSpec::new(OrderKParams::new(k, lambda).unwrap(), law, clock).unwrap()
    }

    fn dirac1() -> JumpLaw {
        JumpLaw::dirac(1.0).unwrap()
    }

    fn half() -> MtssParams {
        MtssParams::single(0.5, 1.0).unwrap()
    }

    #[test]
    fn z1_mean_examples() {
        assert_eq!(z1_mean(&spec(1, 1.0, dirac1(), Clock::Mtss(half())), 1.0).unwrap(), 0.5);
        assert_eq!(z1_mean(&spec(2, 1.0, dirac1(), Clock::Mtss(half())), 1.0).unwrap(), 1.5);
        assert_eq!(z1_mean(&spec(2, 1.0, dirac1(), Clock::Mtss(half())), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn z1_variance_is_diagonal_covariance() {
        let s = spec(3, 0.7, JumpLaw::exponential(2.0).unwrap(), Clock::Mtss(MtssParams::new(0.6, 0.4, 0.5, 0.7, 1.0, 2.0).unwrap()));
        let (mz, vz) = unit_moments(&s).unwrap();
        let clock = s.clock.params();
        for t in [0.5, 1.0, 3.0] {
            let want = mz * mz * clock.variance(t).unwrap() + clock.mean(t).unwrap() * vz;
            assert_eq!(z1_variance(&s, t).unwrap(), want);
        }
        assert_eq!(z1_cov(&s, 1.0, 2.0).unwrap(), z1_cov(&s, 2.0, 1.0).unwrap());
        assert_eq!(z1_cov(&s, 1.0, 2.0).unwrap(), z1_variance(&s, 1.0).unwrap());
    }

    #[test]
    fn stable_clock_refuses_moments() {
        let s = spec(2, 1.0, dirac1(), Clock::Mtss(MtssParams::stable(0.5).unwrap()));
        assert!(matches!(z1_mean(&s, 1.0), Err(Error::InfiniteMoment(_))));
        assert!(matches!(z1_cov(&s, 1.0, 2.0), Err(Error::InfiniteMoment(_))));
        assert!(z1_dispersion_classify(&s, 1.0).is_err());
        assert!(z1_lrd_exponent(&s).is_err());
        assert!(z1_pgf(&s, 0.5, 1.0).is_ok());
    }

    #[test]
    fn lrd_constant() {
        let s = spec(1, 1.0, dirac1(), Clock::Mtss(half()));
        let lrd = z1_lrd_exponent(&s).unwrap();
        assert_eq!(lrd.exponent, -0.5);
        assert_eq!(lrd.constant, 0.5);
        assert_eq!(lrd.variance_slope, 0.75);
        assert!((z1_variance(&s, 1e6).unwrap() / 1e6 - lrd.variance_slope).abs() < 1e-12);
        // correlation follows c(s) t^{-1/2} exactly in t for Lévy clocks
        let r = z1_correlation(&s, 1.0, 400.0).unwrap() / z1_correlation(&s, 1.0, 100.0).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn overdispersed_base_stays_overdispersed() {
        for k in 1..=5 {
            let s = spec(k, 1.3, dirac1(), Clock::Mtss(MtssParams::new(0.6, 0.4, 0.5, 0.7, 1.0, 2.0).unwrap()));
            let d = z1_dispersion_classify(&s, 2.0).unwrap();
            assert_eq!(d.class, DispersionClass::Over);
            assert!(d.gap > 0.0);
        }
    }

    #[test]
    fn underdispersed_base_can_go_either_way() {
        // k=1, Exp(3): E[Z(1)] = 1/3, Var[Z(1)] = 2/9, base gap -1/9.
        let law = JumpLaw::exponential(3.0).unwrap();
        // α=0.5, μ small: Var[S]/E[S] = (1-α)/μ large, gap > 0.
        let big = spec(1, 1.0, law.clone(), Clock::Mtss(MtssParams::single(0.5, 0.01).unwrap()));
        let d = z1_dispersion_classify(&big, 1.0).unwrap();
        assert_eq!(d.base_class, DispersionClass::Under);
        assert_eq!(d.class, DispersionClass::Over);
        // μ large: Var[S]/E[S] small, gap < 0.
        let small = spec(1, 1.0, law.clone(), Clock::Mtss(MtssParams::single(0.5, 100.0).unwrap()));
        assert_eq!(z1_dispersion_classify(&small, 1.0).unwrap().class, DispersionClass::Under);
        // balance: E[Z(1)]² (1-α)/μ = 1/9 → (1/9)(1/2)/μ = 1/9 → μ = 1/2.
        let balanced = spec(1, 1.0, law, Clock::Mtss(MtssParams::single(0.5, 0.5).unwrap()));
        let d = z1_dispersion_classify(&balanced, 1.0).unwrap();
        assert!(d.gap.abs() < 1e-15, "{}", d.gap);
        assert_eq!(d.class, DispersionClass::Equi);
    }

    #[test]
    fn pgf_reduces_to_space_fractional_form() {
        let p = OrderKParams::new(3, 0.8).unwrap();
        let s = spec(3, 0.8, dirac1(), Clock::Mtss(MtssParams::stable(0.6).unwrap()));
        for u in [0.0, 0.3, 0.9, 1.0] {
            let a = z1_pgf(&s, u, 1.7).unwrap();
            let b = space_fractional_pgf(&p, 0.6, u, 1.7).unwrap();
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        assert_eq!(z1_pgf(&s, 1.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn pgf_derivative_matches_mean() {
        let law = JumpLaw::discrete(vec![0.2, 0.5, 0.3]).unwrap();
        let s = spec(2, 0.9, law, Clock::Mtss(MtssParams::new(0.6, 0.4, 0.5, 0.7, 1.0, 2.0).unwrap()));
        let h = 1e-6;
        let f = |u| z1_pgf(&s, u, 1.5).unwrap();
        let d = (3.0 * f(1.0) - 4.0 * f(1.0 - h) + f(1.0 - 2.0 * h)) / (2.0 * h);
        let m = z1_mean(&s, 1.5).unwrap();
        assert!(((d - m) / m).abs() < 1e-6);
    }

    fn inverse_table() -> InverseMoments {
        InverseMoments {
            grid: vec![1.0, 2.0],
            mean: vec![2.5, 4.5],
            covariance: vec![vec![3.0, 3.5], vec![3.5, 7.0]],
            stderr_mean: vec![0.0, 0.0],
            replicates: 1,
            bias_bound: 0.0,
        }
    }

    #[test]
    fn z2_formulas() {
        let clock = Clock::InverseMtss { params: half(), step: None };
        // k=2, Dirac(1): E[Z(1)] = 3, Var[Z(1)] = 5
        let s = spec(2, 1.0, dirac1(), clock);
        let inv = inverse_table();
        assert_eq!(z2_mean(&s, 2.0, &inv).unwrap(), 13.5);
        assert_eq!(z2_cov(&s, 1.0, 2.0, &inv).unwrap(), 5.0 * 2.5 + 9.0 * 3.5);
        assert_eq!(z2_variance(&s, 2.0, &inv).unwrap(), 5.0 * 4.5 + 9.0 * 7.0);
        assert!(matches!(z2_mean(&s, 1.5, &inv), Err(Error::Missing(_))));
        let zero = spec(2, 1.0, JumpLaw::dirac(0.0).unwrap(), clock);
        assert_eq!(z2_mean(&zero, 1.0, &inv).unwrap(), 0.0);
        assert!(z2_mean(&spec(2, 1.0, dirac1(), Clock::Mtss(half())), 1.0, &inv).is_err());
    }

    #[test]
    fn z2_asymptote_examples() {
        let clock = Clock::InverseMtss { params: half(), step: None };
        let a = z2_asymptotics(&spec(1, 1.0, dirac1(), clock), 10.0).unwrap();
        assert_eq!(a.mean, 20.0);
        assert_eq!(a.variance, 20.0);
        for k in 1..=5u32 {
            let a = z2_asymptotics(&spec(k, 1.0, dirac1(), clock), 10.0).unwrap();
            assert!((a.variance / a.mean - (2.0 * f64::from(k) + 1.0) / 3.0).abs() < 1e-14);
        }
        // σ² = 0.25, m = 0.5: 1/0.5 + 0.25/0.125 = 4
        assert_eq!(z2_variance_slope_renewal(&spec(1, 1.0, dirac1(), clock)).unwrap(), 4.0);
        let stable = Clock::InverseMtss {
            params: MtssParams::stable(0.5).unwrap(),
            step: None,
        };
        assert!(z2_asymptotics(&spec(1, 1.0, dirac1(), stable), 10.0).is_err());
    }
}
