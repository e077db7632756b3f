use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Bins are merged until both samples expect at least this many counts.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmfComparison {
    /// `½ Σ |p̂_a(n) - p̂_b(n)|`.
    pub tv_distance: f64,
    pub chi2_statistic: f64,
    pub degrees_of_freedom: usize,
    pub chi2_pvalue: f64,
}

/// Total-variation distance and chi-square homogeneity test for two integer
/// samples.
pub fn two_sample_pmf_test(a: &[u64], b: &[u64]) -> Result<PmfComparison> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Insufficient("both samples must be non-empty".into()));
    }
    let mut counts: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for &x in a {
        counts.entry(x).or_default().0 += 1.0;
    }
    for &x in b {
        counts.entry(x).or_default().1 += 1.0;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let tv = 0.5 * counts.values().map(|(ca, cb)| (ca / na - cb / nb).abs()).sum::<f64>();

    // Sweep the support in increasing order, closing a bin once both
    // expected counts reach the threshold; the remainder joins the last bin.
    let (fa, fb) = (na / (na + nb), nb / (na + nb));
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut open = (0.0, 0.0);
    for &(ca, cb) in counts.values() {
        open.0 += ca;
        open.1 += cb;
        let pooled = open.0 + open.1;
        if pooled * fa.min(fb) >= MIN_EXPECTED_COUNT {
            bins.push(open);
            open = (0.0, 0.0);
        }
    }
    if open.0 + open.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += open.0;
                last.1 += open.1;
            }
            None => bins.push(open),
        }
    }

    let mut stat = 0.0;
    for &(ca, cb) in &bins {
        let pooled = ca + cb;
        let (ea, eb) = (pooled * fa, pooled * fb);
        stat += (ca - ea).powi(2) / ea + (cb - eb).powi(2) / eb;
    }
    let dof = bins.len().saturating_sub(1);
    let pvalue = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map(|d| d.sf(stat)).unwrap_or(f64::NAN)
    };
    Ok(PmfComparison {
        tv_distance: tv,
        chi2_statistic: stat,
        degrees_of_freedom: dof,
        chi2_pvalue: pvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Poisson};

    fn poisson(mean: f64, n: usize, seed: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Poisson::new(mean).unwrap();
        (0..n).map(|_| d.sample(&mut rng) as u64).collect()
    }

    #[test]
    fn identical_samples() {
        let a = poisson(3.0, 5000, 1);
        let r = two_sample_pmf_test(&a, &a).unwrap();
        assert_eq!(r.tv_distance, 0.0);
        assert_eq!(r.chi2_statistic, 0.0);
        assert!((r.chi2_pvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detects_shifted_mean() {
        let r = two_sample_pmf_test(&poisson(1.0, 100_000, 2), &poisson(2.0, 100_000, 3)).unwrap();
        assert!(r.chi2_pvalue < 0.001);
        assert!(r.tv_distance > 0.2);
    }

    #[test]
    fn same_law_is_not_rejected() {
        let r = two_sample_pmf_test(&poisson(4.0, 50_000, 4), &poisson(4.0, 50_000, 5)).unwrap();
        assert!(r.chi2_pvalue > 0.001, "{r:?}");
    }

    #[test]
    fn sparse_tails_are_merged() {
        let a: Vec<u64> = (0..100).map(|i| if i < 95 { 0 } else { 10 + i }).collect();
        let b: Vec<u64> = (0..100).map(|i| if i < 96 { 0 } else { 20 + i }).collect();
        let r = two_sample_pmf_test(&a, &b).unwrap();
        assert_eq!(r.degrees_of_freedom, 0);
        assert_eq!(r.chi2_pvalue, 1.0);
        assert!(two_sample_pmf_test(&[], &b).is_err());
    }
}
