//! Pmf of the Poisson distribution of order `k`.
//!
//! Two routes are provided. [`pok_pmf_enum`] sums over every solution of
//! `x_1 + 2 x_2 + ... + k x_k = n` and is exponential in `n`; it serves as
//! the reference. [`pok_pmf`] uses the linear recursion
//! `p_n = (λt/n) Σ_{i=1}^{min(k,n)} i p_{n-i}` with `p_0 = e^{-kλt}`.

use serde::{Deserialize, Serialize};

use super::law::OrderKParams;
use crate::error::{ensure_finite_nonneg, invalid, Error, Result};
use crate::numeric::{compensated_sum, CompensatedSum};

/// Maximum number of compositions [`pok_pmf_enum`] will visit.
pub const ENUMERATION_BUDGET: u64 = 50_000_000;

/// Cumulative mass the automatic truncation must reach.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Hard cap on the automatic support length.
const MAX_AUTO_SUPPORT: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PokPmfTable {
    pub params: OrderKParams,
    pub t: f64,
    /// `probs[n] = P[N^(k)(t) = n]` for `n = 0..=nmax`.
    pub probs: Vec<f64>,
}

impl PokPmfTable {
    pub fn nmax(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.probs.iter().copied())
    }

    /// Mass beyond `nmax`, clamped at zero.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.total_mass()).max(0.0)
    }
}

/// Number of solutions of `x_1 + 2 x_2 + ... + k x_k = n`, saturating.
pub fn composition_count(k: u32, n: u64) -> u64 {
    let n = n as usize;
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in 1..=(k as usize).min(n.max(1)) {
        for m in part..=n {
            ways[m] = ways[m].saturating_add(ways[m - part]);
        }
    }
    ways[n]
}

/// Reference pmf by direct enumeration of the restricted compositions.
pub fn pok_pmf_enum(params: &OrderKParams, t: f64, n: u64) -> Result<f64> {
    params.validate()?;
    ensure_finite_nonneg("t", t)?;
    let needed = composition_count(params.k, n);
    if needed > ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget {
            needed,
            budget: ENUMERATION_BUDGET,
        });
    }
    let rate = params.lambda * t;
    if rate == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    // weight(j, x) = rate^x / x!, built incrementally per part size.
    let mut sum = CompensatedSum::default();
    enumerate(params.k, n, 1.0, rate, &mut |term| sum.add(term));
    Ok((-params.arrival_rate() * t).exp() * sum.value())
}

/// Visits every product `Π_j rate^{x_j}/x_j!` over compositions of `remaining`
/// into parts of size at most `part`.
fn enumerate(part: u32, remaining: u64, acc: f64, rate: f64, visit: &mut impl FnMut(f64)) {
    if part == 1 {
        visit(acc * power_over_factorial(rate, remaining));
        return;
    }
    let part_u = u64::from(part);
    let mut x = 0u64;
    let mut w = 1.0;
    while x * part_u <= remaining {
        enumerate(part - 1, remaining - x * part_u, acc * w, rate, visit);
        x += 1;
        w *= rate / x as f64;
    }
}

fn power_over_factorial(rate: f64, x: u64) -> f64 {
    (1..=x).fold(1.0, |w, i| w * rate / i as f64)
}

/// Pmf table for `n = 0..=nmax` by the linear recursion.
pub fn pok_pmf(params: &OrderKParams, t: f64, nmax: usize) -> Result<PokPmfTable> {
    params.validate()?;
    ensure_finite_nonneg("t", t)?;
    let mut rec = Recursion::new(params, t);
    let probs = (0..=nmax).map(|_| rec.next_prob()).collect();
    Ok(PokPmfTable {
        params: *params,
        t,
        probs,
    })
}

/// Pmf table truncated where the cumulative mass first reaches `1 - 1e-10`.
pub fn pok_pmf_auto(params: &OrderKParams, t: f64) -> Result<PokPmfTable> {
    pok_pmf_to_tolerance(params, t, TAIL_TOLERANCE)
}

pub fn pok_pmf_to_tolerance(params: &OrderKParams, t: f64, tail: f64) -> Result<PokPmfTable> {
    params.validate()?;
    ensure_finite_nonneg("t", t)?;
    if !(tail > 0.0 && tail < 1.0) {
        return Err(invalid("tail", "must lie in (0, 1)"));
    }
    let mut rec = Recursion::new(params, t);
    let mut probs = Vec::new();
    let mut sum = CompensatedSum::default();
    // Mean of N^(k)(t); the loop must pass it before mass can be complete.
    let mean = params.first_factor() * params.lambda * t;
    loop {
        let p = rec.next_prob();
        probs.push(p);
        sum.add(p);
        let n = probs.len() - 1;
        if sum.value() >= 1.0 - tail && n as f64 >= mean {
            break;
        }
        if probs.len() >= MAX_AUTO_SUPPORT {
            return Err(Error::Budget(format!(
                "pmf support exceeds {MAX_AUTO_SUPPORT} terms"
            )));
        }
    }
    Ok(PokPmfTable {
        params: *params,
        t,
        probs,
    })
}

/// Streaming form of the recursion with periodic rescaling, so that
/// `e^{-kλt}` underflow does not zero the whole table for large `kλt`.
struct Recursion {
    k: usize,
    rate: f64,
    // window[n % k] holds the scaled value of p_n
    window: Vec<f64>,
    n: usize,
    // log of the factor relating scaled values to probabilities
    log_scale: f64,
}

impl Recursion {
    fn new(params: &OrderKParams, t: f64) -> Self {
        Self {
            k: params.k as usize,
            rate: params.lambda * t,
            window: vec![0.0; params.k as usize],
            n: 0,
            log_scale: -params.arrival_rate() * t,
        }
    }

    fn next_prob(&mut self) -> f64 {
        let n = self.n;
        let scaled = if n == 0 {
            1.0
        } else {
            let mut acc = 0.0;
            for i in 1..=self.k.min(n) {
                acc += i as f64 * self.window[(n - i) % self.k];
            }
            self.rate / n as f64 * acc
        };
        self.window[n % self.k] = scaled;
        self.n += 1;

        let prob = if scaled == 0.0 {
            0.0
        } else if self.log_scale.abs() < 700.0 {
            scaled * self.log_scale.exp()
        } else {
            (scaled.ln() + self.log_scale).exp()
        };
        if scaled > 1e200 {
            for w in &mut self.window {
                *w *= 1e-200;
            }
            self.log_scale += 200.0 * std::f64::consts::LN_10;
        }
        prob
    }
}
