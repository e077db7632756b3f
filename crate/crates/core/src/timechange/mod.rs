//! The compound Poisson process of order `k` run on a random clock.
//!
//! * `Z1(t) = Z(S(t))` with `S` a mixture of tempered stable subordinators.
//! * `Z2(t) = Z(E(t))` with `E` the first-passage time of such a subordinator.
//!
//! Both samplers draw the clock first and then the increments of `Z` over the
//! clock's increments. Because `Z` is a Lévy process independent of the
//! clock, `Z(b) - Z(a)` given the clock is just a fresh increment of length
//! `b - a`, so no inner path has to be stored.

mod moments;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::orderk::{sample_cppok_increment, JumpLaw, OrderKParams, ProcessPath};
use crate::subordinators::{default_inverse_step, sample_inverse_path, sample_mtss_path, MtssParams};

pub use moments::{
    space_fractional_pgf, z1_correlation, z1_cov, z1_dispersion_classify, z1_lrd_exponent, z1_mean,
    z1_pgf, z1_variance, z2_asymptotics, z2_cov, z2_mean, z2_variance, z2_variance_slope_renewal,
    InverseMoments, LrdStructure, Z1Dispersion, Z2Asymptotics,
};

/// The random clock driving the time change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Clock {
    Mtss(MtssParams),
    InverseMtss {
        #[serde(flatten)]
        params: MtssParams,
        /// Operational lattice step; `None` picks 1% of the asymptotic `E(tmax)`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
}

impl Clock {
    pub fn params(&self) -> &MtssParams {
        match self {
            Self::Mtss(p) | Self::InverseMtss { params: p, .. } => p,
        }
    }
}

/// Named special cases of the subordinator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    General,
    /// All active components share `α` and have `μ = 0`: `f(s) = s^α`.
    SpaceFractional,
    /// All active components share `α` and one `μ > 0`: `f(s) = (s+μ)^α - μ^α`.
    TemperedSpaceFractional,
}

impl SpecialCase {
    pub fn of(params: &MtssParams) -> Self {
        let mut comps = params.components();
        let first = comps.next().expect("c1 + c2 = 1 leaves an active component");
        if !comps.all(|c| c.alpha == first.alpha && c.mu == first.mu) {
            Self::General
        } else if first.mu == 0.0 {
            Self::SpaceFractional
        } else {
            Self::TemperedSpaceFractional
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::General => "general",
            Self::SpaceFractional => "space_fractional",
            Self::TemperedSpaceFractional => "tempered_space_fractional",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeChangedSpec {
    pub base: OrderKParams,
    pub law: JumpLaw,
    pub clock: Clock,
}

impl TimeChangedSpec {
    pub fn new(base: OrderKParams, law: JumpLaw, clock: Clock) -> Result<Self> {
        let spec = Self { base, law, clock };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.law.validate()?;
        self.clock.params().validate()?;
        if let Clock::InverseMtss { step: Some(step), .. } = self.clock {
            if !(step.is_finite() && step > 0.0) {
                return Err(invalid("step", format!("must be finite and positive, got {step}")));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> SpecialCase {
        SpecialCase::of(self.clock.params())
    }

    fn mtss(&self) -> Result<&MtssParams> {
        match &self.clock {
            Clock::Mtss(p) => Ok(p),
            Clock::InverseMtss { .. } => Err(invalid("clock", "requires a subordinator clock, got its inverse")),
        }
    }

    fn inverse(&self) -> Result<(&MtssParams, Option<f64>)> {
        match &self.clock {
            Clock::InverseMtss { params, step } => Ok((params, *step)),
            Clock::Mtss(_) => Err(invalid("clock", "requires an inverse subordinator clock")),
        }
    }
}

/// Evaluates `Z` at the non-decreasing clock readings `levels`.
fn compose<R: Rng>(spec: &TimeChangedSpec, tgrid: &[f64], levels: &[f64], rng: &mut R) -> Result<ProcessPath> {
    let mut at = 0.0;
    let mut value = 0.0;
    let mut values = Vec::with_capacity(levels.len());
    for &level in levels {
        value += sample_cppok_increment(&spec.base, &spec.law, level - at, rng)?;
        at = level;
        values.push(value);
    }
    ProcessPath::new(tgrid.to_vec(), values, *tgrid.last().unwrap())
}

/// `Z1(t) = Z(S(t))` on `tgrid`.
///
/// The returned path holds one value per grid time; its step lookup between
/// grid points returns the value at the previous grid time.
pub fn sample_z1<R: Rng>(spec: &TimeChangedSpec, tgrid: &[f64], rng: &mut R) -> Result<ProcessPath> {
    let clock = spec.mtss()?;
    let s = sample_mtss_path(clock, tgrid, rng)?;
    compose(spec, tgrid, &s.values, rng)
}

/// `Z2(t) = Z(E(t))` on `tgrid`, with `E` biased upward by at most the
/// lattice step.
pub fn sample_z2<R: Rng>(spec: &TimeChangedSpec, tgrid: &[f64], rng: &mut R) -> Result<ProcessPath> {
    let (clock, step) = spec.inverse()?;
    let step = match step {
        Some(step) => step,
        None => default_inverse_step(clock, *tgrid.last().ok_or_else(|| invalid("grid", "must not be empty"))?)?,
    };
    let e = sample_inverse_path(clock, tgrid, step, rng)?;
    compose(spec, tgrid, &e.values, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(k: u32, law: JumpLaw, clock: Clock) -> TimeChangedSpec {
        TimeChangedSpec::new(OrderKParams::new(k, 1.0).unwrap(), law, clock).unwrap()
    }

    #[test]
    fn labels() {
        let stable = MtssParams::new(0.3, 0.7, 0.6, 0.6, 0.0, 0.0).unwrap();
        assert_eq!(SpecialCase::of(&stable), SpecialCase::SpaceFractional);
        assert_eq!(SpecialCase::of(&MtssParams::single(0.6, 2.0).unwrap()), SpecialCase::TemperedSpaceFractional);
        let mixed = MtssParams::new(0.3, 0.7, 0.6, 0.6, 1.0, 0.0).unwrap();
        assert_eq!(SpecialCase::of(&mixed), SpecialCase::General);
        let mixed = MtssParams::new(0.6, 0.4, 0.5, 0.7, 1.0, 2.0).unwrap();
        assert_eq!(SpecialCase::of(&mixed), SpecialCase::General);
    }

    #[test]
    fn clock_round_trips_through_json() {
        let clock = Clock::InverseMtss {
            params: MtssParams::single(0.5, 1.0).unwrap(),
            step: Some(0.01),
        };
        let text = serde_json::to_string(&clock).unwrap();
        assert!(text.contains("\"kind\":\"inverse_mtss\""));
        assert_eq!(serde_json::from_str::<Clock>(&text).unwrap(), clock);
        let clock = Clock::Mtss(MtssParams::stable(0.5).unwrap());
        let text = serde_json::to_string(&clock).unwrap();
        assert_eq!(serde_json::from_str::<Clock>(&text).unwrap(), clock);
    }

    #[test]
    fn samplers_check_the_clock_variant() {
        let p = MtssParams::single(0.5, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let s1 = spec(1, JumpLaw::dirac(1.0).unwrap(), Clock::Mtss(p));
        assert!(sample_z2(&s1, &[1.0], &mut rng).is_err());
        let s2 = spec(1, JumpLaw::dirac(1.0).unwrap(), Clock::InverseMtss { params: p, step: None });
        assert!(sample_z1(&s2, &[1.0], &mut rng).is_err());
        assert!(TimeChangedSpec::new(s2.base, s2.law.clone(), Clock::InverseMtss { params: p, step: Some(0.0) }).is_err());
    }

    #[test]
    fn z1_starts_at_zero_and_increases() {
        let s = spec(3, JumpLaw::exponential(1.0).unwrap(), Clock::Mtss(MtssParams::new(0.6, 0.4, 0.5, 0.7, 1.0, 2.0).unwrap()));
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let path = sample_z1(&s, &grid, &mut rng).unwrap();
            assert_eq!(path.values[0], 0.0);
            assert!(path.is_non_decreasing());
            assert_eq!(path.times, grid);
        }
    }

    #[test]
    fn z2_is_non_decreasing_with_integer_values() {
        let law = JumpLaw::discrete(vec![0.1, 0.5, 0.4]).unwrap();
        let clock = Clock::InverseMtss {
            params: MtssParams::single(0.5, 1.0).unwrap(),
            step: Some(0.02),
        };
        let s = spec(2, law, clock);
        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let path = sample_z2(&s, &grid, &mut rng).unwrap();
            assert!(path.is_non_decreasing());
            assert!(path.values.iter().all(|v| v.fract() == 0.0));
        }
    }

    #[test]
    fn zero_jumps_give_a_zero_path() {
        let s = spec(2, JumpLaw::dirac(0.0).unwrap(), Clock::Mtss(MtssParams::stable(0.7).unwrap()));
        let path = sample_z1(&s, &[0.5, 1.0, 2.0], &mut ChaCha8Rng::seed_from_u64(44)).unwrap();
        assert!(path.values.iter().all(|&v| v == 0.0));
    }
}
