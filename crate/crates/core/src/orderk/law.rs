use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Exp, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, invalid, Error, Result};

/// Tolerance on the total mass of a discrete jump pmf.
pub const PMF_SUM_TOLERANCE: f64 = 1e-12;

/// Parameters of the Poisson process of order `k`.
///
/// Arrivals occur at rate `k * lambda`; each arrival carries a batch whose
/// size is uniform on `{1, ..., k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderKParams {
    pub k: u32,
    pub lambda: f64,
}

impl OrderKParams {
    pub fn new(k: u32, lambda: f64) -> Result<Self> {
        let p = Self { k, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("k", "order must be at least 1"));
        }
        ensure_positive("lambda", self.lambda)
    }

    /// Rate `k * lambda` of the driving Poisson process.
    pub fn arrival_rate(&self) -> f64 {
        f64::from(self.k) * self.lambda
    }

    /// `k(k+1)/2`, the mean batch size times `k`.
    pub fn first_factor(&self) -> f64 {
        let k = f64::from(self.k);
        k * (k + 1.0) / 2.0
    }

    /// `k(k+1)(2k+1)/6`, the second moment of the batch size times `k`.
    pub fn second_factor(&self) -> f64 {
        let k = f64::from(self.k);
        k * (k + 1.0) * (2.0 * k + 1.0) / 6.0
    }
}

/// A continuous jump distribution supplied by the caller.
///
/// Moments are analytic; they are never estimated from samples.
pub trait ContinuousJump: fmt::Debug + Send + Sync {
    fn sample(&self, rng: &mut dyn RngCore) -> f64;
    fn mean(&self) -> f64;
    fn second_moment(&self) -> f64;
    fn name(&self) -> &str {
        "custom"
    }
}

/// Pmf on `{0, 1, 2, ...}` with a precomputed cumulative table for sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiscreteLaw {
    weights: Vec<f64>,
    cdf: Vec<f64>,
}

impl DiscreteLaw {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("weights", "pmf must have at least one entry"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid("weights", format!("entries must be non-negative, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(invalid("weights", format!("pmf sums to {total}, not 1")));
        }
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(Self { weights, cdf })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let total = *self.cdf.last().unwrap();
        let u = rng.random::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        // Zero-weight trailing entries are never selected.
        let idx = idx.min(self.last_support());
        idx as f64
    }

    fn last_support(&self) -> usize {
        self.weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    }

    fn mean(&self) -> f64 {
        self.weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum()
    }

    fn second_moment(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(n, w)| (n * n) as f64 * w)
            .sum()
    }
}

impl TryFrom<Vec<f64>> for DiscreteLaw {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DiscreteLaw> for Vec<f64> {
    fn from(d: DiscreteLaw) -> Self {
        d.weights
    }
}

/// Distribution `H` of the compounded jumps `Y_i`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JumpLaw {
    /// Point mass at `point`.
    Dirac { point: f64 },
    /// Pmf `q_0, q_1, ...` on the non-negative integers.
    Discrete { pmf: DiscreteLaw },
    /// Exponential with rate `rate` (mean `1/rate`).
    Exponential { rate: f64 },
    #[serde(skip)]
    Custom(Arc<dyn ContinuousJump>),
}

impl JumpLaw {
    pub fn dirac(point: f64) -> Result<Self> {
        if !point.is_finite() {
            return Err(invalid("point", "must be finite"));
        }
        Ok(Self::Dirac { point })
    }

    pub fn discrete(weights: Vec<f64>) -> Result<Self> {
        Ok(Self::Discrete {
            pmf: DiscreteLaw::new(weights)?,
        })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        ensure_positive("rate", rate)?;
        Ok(Self::Exponential { rate })
    }

    pub fn custom(law: Arc<dyn ContinuousJump>) -> Result<Self> {
        let m = law.mean();
        let m2 = law.second_moment();
        if !(m.is_finite() && m2.is_finite()) {
            return Err(Error::InfiniteMoment("jump second moment"));
        }
        if m2 < m * m {
            return Err(invalid("custom", "second moment is smaller than the squared mean"));
        }
        Ok(Self::Custom(law))
    }

    /// Re-checks invariants, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Dirac { point } => Self::dirac(*point).map(|_| ()),
            Self::Discrete { pmf } => DiscreteLaw::new(pmf.weights.clone()).map(|_| ()),
            Self::Exponential { rate } => ensure_positive("rate", *rate),
            Self::Custom(law) => Self::custom(Arc::clone(law)).map(|_| ()),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Dirac { point } => *point,
            Self::Discrete { pmf } => pmf.sample(rng),
            Self::Exponential { rate } => Exp::new(*rate).unwrap().sample(rng),
            Self::Custom(law) => law.sample(rng),
        }
    }

    /// Sum of `n` independent jumps.
    ///
    /// Closed forms are used where they exist (`n * point`, Gamma(n) for
    /// exponential jumps), so the cost does not grow with `n` for those laws.
    pub fn sample_sum<R: Rng>(&self, n: u64, rng: &mut R) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match self {
            Self::Dirac { point } => n as f64 * point,
            Self::Exponential { rate } => {
                Gamma::new(n as f64, 1.0 / rate).unwrap().sample(rng)
            }
            _ => (0..n).map(|_| self.sample(rng)).sum(),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Dirac { point } => *point,
            Self::Discrete { pmf } => pmf.mean(),
            Self::Exponential { rate } => 1.0 / rate,
            Self::Custom(law) => law.mean(),
        }
    }

    pub fn second_moment(&self) -> f64 {
        match self {
            Self::Dirac { point } => point * point,
            Self::Discrete { pmf } => pmf.second_moment(),
            Self::Exponential { rate } => 2.0 / (rate * rate),
            Self::Custom(law) => law.second_moment(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            // Exact zero, not a difference of equal floats.
            Self::Dirac { .. } => 0.0,
            Self::Exponential { rate } => 1.0 / (rate * rate),
            _ => self.second_moment() - self.mean().powi(2),
        }
    }

    /// Pmf on `{0, 1, ...}` when the law is integer valued, `None` otherwise.
    pub fn integer_pmf(&self) -> Option<Vec<f64>> {
        match self {
            Self::Dirac { point } if *point >= 0.0 && point.fract() == 0.0 => {
                let mut v = vec![0.0; *point as usize + 1];
                v[*point as usize] = 1.0;
                Some(v)
            }
            Self::Discrete { pmf } => Some(pmf.weights.clone()),
            _ => None,
        }
    }

    pub fn require_integer_pmf(&self) -> Result<Vec<f64>> {
        self.integer_pmf().ok_or(Error::NotDiscrete)
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Dirac { point } => format!("dirac({point})"),
            Self::Discrete { pmf } => format!("discrete({:?})", pmf.weights),
            Self::Exponential { rate } => format!("exponential({rate})"),
            Self::Custom(law) => law.name().to_string(),
        }
    }
}

impl PartialEq for JumpLaw {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Dirac { point: a }, Self::Dirac { point: b }) => a == b,
            (Self::Discrete { pmf: a }, Self::Discrete { pmf: b }) => a == b,
            (Self::Exponential { rate: a }, Self::Exponential { rate: b }) => a == b,
            (Self::Custom(a), Self::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}
