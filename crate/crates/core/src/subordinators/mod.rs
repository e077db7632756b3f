//! Stable, tempered stable and mixture-of-tempered-stable subordinators.
//!
//! A mixture with weights `c1 + c2 = 1` has Laplace exponent
//!
//! ```text
//! f(s) = c1((s + μ1)^α1 - μ1^α1) + c2((s + μ2)^α2 - μ2^α2)
//! ```
//!
//! and, because exponents add, is sampled as the sum of two independent
//! tempered stable subordinators with Lévy densities scaled by `c1` and `c2`.
//! No density is ever evaluated: increments come from an exact stable
//! sampler followed by exponential rejection.

mod inverse;
mod sampling;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite_nonneg, invalid, Error, Result};

pub use inverse::{
    default_inverse_step, inverse_mean_asymptote, sample_inverse_path, sample_inverse_path_traced,
    InversePath, MAX_OPERATIONAL_STEPS,
};
pub use sampling::{sample_mtss_path, sample_stable_increment, sample_tempered_stable_increment, SubordinatorPath};

/// Tolerance on `c1 + c2 = 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MtssParams {
    pub c1: f64,
    pub c2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub mu1: f64,
    pub mu2: f64,
}

/// One active term `c((s + μ)^α - μ^α)` of the mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub alpha: f64,
    pub mu: f64,
}

impl Component {
    fn exponent(&self, s: f64) -> f64 {
        self.weight * ((s + self.mu).powf(self.alpha) - self.mu.powf(self.alpha))
    }
}

impl MtssParams {
    pub fn new(c1: f64, c2: f64, alpha1: f64, alpha2: f64, mu1: f64, mu2: f64) -> Result<Self> {
        let p = Self {
            c1,
            c2,
            alpha1,
            alpha2,
            mu1,
            mu2,
        };
        p.validate()?;
        Ok(p)
    }

    /// Tempered stable subordinator with `c1 = 1`.
    pub fn single(alpha: f64, mu: f64) -> Result<Self> {
        Self::new(1.0, 0.0, alpha, alpha, mu, mu)
    }

    /// Pure `α`-stable subordinator, `f(s) = s^α`.
    pub fn stable(alpha: f64) -> Result<Self> {
        Self::single(alpha, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite_nonneg("c1", self.c1)?;
        ensure_finite_nonneg("c2", self.c2)?;
        if (self.c1 + self.c2 - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(invalid("c1", format!("c1 + c2 must equal 1, got {}", self.c1 + self.c2)));
        }
        for (name, c, alpha, mu) in [
            ("alpha1", self.c1, self.alpha1, self.mu1),
            ("alpha2", self.c2, self.alpha2, self.mu2),
        ] {
            if c == 0.0 {
                continue;
            }
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(invalid(name, format!("stability index must lie in (0, 1), got {alpha}")));
            }
            ensure_finite_nonneg(if name == "alpha1" { "mu1" } else { "mu2" }, mu)?;
        }
        Ok(())
    }

    /// Components with non-zero weight.
    pub fn components(&self) -> impl Iterator<Item = Component> + '_ {
        [
            Component {
                weight: self.c1,
                alpha: self.alpha1,
                mu: self.mu1,
            },
            Component {
                weight: self.c2,
                alpha: self.alpha2,
                mu: self.mu2,
            },
        ]
        .into_iter()
        .filter(|c| c.weight > 0.0)
    }

    /// True when every active component has finite moments (`μ > 0`).
    pub fn has_finite_moments(&self) -> bool {
        self.components().all(|c| c.mu > 0.0)
    }

    fn require_finite_moments(&self, what: &'static str) -> Result<()> {
        if self.has_finite_moments() {
            Ok(())
        } else {
            Err(Error::InfiniteMoment(what))
        }
    }

    /// Laplace exponent `f(s)`.
    pub fn laplace_exponent(&self, s: f64) -> Result<f64> {
        ensure_finite_nonneg("s", s)?;
        Ok(self.components().map(|c| c.exponent(s)).sum())
    }

    /// `E[S(1)] = c1 α1 μ1^{α1-1} + c2 α2 μ2^{α2-1}`.
    pub fn mean_rate(&self) -> Result<f64> {
        self.require_finite_moments("subordinator mean")?;
        Ok(self
            .components()
            .map(|c| c.weight * c.alpha * c.mu.powf(c.alpha - 1.0))
            .sum())
    }

    /// `Var[S(1)] = c1 α1(1-α1) μ1^{α1-2} + c2 α2(1-α2) μ2^{α2-2}`.
    pub fn variance_rate(&self) -> Result<f64> {
        self.require_finite_moments("subordinator variance")?;
        Ok(self
            .components()
            .map(|c| c.weight * c.alpha * (1.0 - c.alpha) * c.mu.powf(c.alpha - 2.0))
            .sum())
    }

    pub fn mean(&self, t: f64) -> Result<f64> {
        ensure_finite_nonneg("t", t)?;
        Ok(t * self.mean_rate()?)
    }

    pub fn variance(&self, t: f64) -> Result<f64> {
        ensure_finite_nonneg("t", t)?;
        Ok(t * self.variance_rate()?)
    }
}

/// Free-function form of [`MtssParams::laplace_exponent`].
pub fn laplace_exponent(params: &MtssParams, s: f64) -> Result<f64> {
    params.laplace_exponent(s)
}

pub fn mtss_mean(params: &MtssParams, t: f64) -> Result<f64> {
    params.mean(t)
}

pub fn mtss_variance(params: &MtssParams, t: f64) -> Result<f64> {
    params.variance(t)
}
