use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::compensated_sum;

pub const MIN_FIT_POINTS: usize = 5;

/// Correlation decay `t^{-d}`: long-range for `d ∈ (0, 1)`, short-range for
/// `d ∈ (1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DependenceClass {
    Lrd,
    Srd,
    Neither,
}

impl DependenceClass {
    pub fn from_exponent(exponent: f64) -> Self {
        if exponent > -1.0 && exponent < 0.0 {
            Self::Lrd
        } else if exponent > -2.0 && exponent < -1.0 {
            Self::Srd
        } else {
            Self::Neither
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Lrd => "lrd",
            Self::Srd => "srd",
            Self::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Intercept of `log y = intercept + exponent · log t`.
    pub intercept: f64,
    pub r_squared: f64,
    pub fit_range: (f64, f64),
    pub points: usize,
    /// Points in range dropped because their value was not positive.
    pub trimmed: usize,
    pub class: DependenceClass,
}

/// Least-squares line through `(log t, log y)` for `t` in `fit_range`.
pub fn fit_power_law(times: &[f64], values: &[f64], fit_range: (f64, f64)) -> Result<PowerLawFit> {
    if times.len() != values.len() {
        return Err(invalid("values", "must pair with times"));
    }
    let (lo, hi) = fit_range;
    if !(lo > 0.0 && lo < hi) {
        return Err(invalid("fit_range", format!("needs 0 < tmin < tmax, got ({lo}, {hi})")));
    }
    let mut trimmed = 0;
    let mut pts = Vec::new();
    for (&t, &y) in times.iter().zip(values) {
        if t < lo || t > hi {
            continue;
        }
        if y > 0.0 && y.is_finite() {
            pts.push((t.ln(), y.ln()));
        } else {
            trimmed += 1;
        }
    }
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::Insufficient(format!(
            "{} usable points in [{lo}, {hi}], need {MIN_FIT_POINTS}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = compensated_sum(pts.iter().map(|p| p.0)) / n;
    let my = compensated_sum(pts.iter().map(|p| p.1)) / n;
    let sxx = compensated_sum(pts.iter().map(|p| (p.0 - mx).powi(2)));
    let sxy = compensated_sum(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)));
    let syy = compensated_sum(pts.iter().map(|p| (p.1 - my).powi(2)));
    if sxx == 0.0 {
        return Err(Error::Insufficient("all fit times coincide".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res = compensated_sum(pts.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)));
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(PowerLawFit {
        exponent,
        intercept,
        r_squared,
        fit_range,
        points: pts.len(),
        trimmed,
        class: DependenceClass::from_exponent(exponent),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn exact_inverse_square_root() {
        let t = logspace(10.0, 1000.0, 12);
        let y: Vec<f64> = t.iter().map(|t| t.powf(-0.5)).collect();
        let fit = fit_power_law(&t, &y, (10.0, 1000.0)).unwrap();
        assert!((fit.exponent + 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.class, DependenceClass::Lrd);
    }

    #[test]
    fn steep_decay_is_short_range() {
        let t = logspace(1.0, 100.0, 8);
        let y: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(-1.5)).collect();
        let fit = fit_power_law(&t, &y, (1.0, 100.0)).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert_eq!(fit.class, DependenceClass::Srd);
    }

    #[test]
    fn non_positive_points_are_trimmed() {
        let t = logspace(1.0, 100.0, 8);
        let mut y: Vec<f64> = t.iter().map(|t| t.powf(-0.5)).collect();
        y[3] = -0.01;
        let fit = fit_power_law(&t, &y, (1.0, 100.0)).unwrap();
        assert_eq!((fit.points, fit.trimmed), (7, 1));
        y[4] = 0.0;
        y[5] = 0.0;
        y[6] = f64::NAN;
        assert!(matches!(fit_power_law(&t, &y, (1.0, 100.0)), Err(Error::Insufficient(_))));
    }

    #[test]
    fn too_few_points() {
        let t = [1.0, 2.0, 3.0, 4.0];
        assert!(fit_power_law(&t, &[1.0; 4], (1.0, 4.0)).is_err());
        assert!(fit_power_law(&t, &[1.0; 4], (4.0, 1.0)).is_err());
    }
}
