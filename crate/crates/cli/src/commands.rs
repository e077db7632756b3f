//! Subcommand implementations.

use cppok::orderk::{
    cppok_correlation, cppok_mean, cppok_variance, dispersion_report, pok_pmf, pok_pmf_enum, sample_cppok_grid,
    EQUIDISPERSION_TOLERANCE,
};
use cppok::stats::{fit_power_law, run_ensemble_raw, run_grid_ensemble, scalar_summary, Ensemble, MonteCarloConfig, PowerLawFit};
use cppok::timechange::{
    sample_z1, sample_z2, z1_correlation, z1_dispersion_classify, z1_mean, z1_variance, z2_asymptotics,
};
use cppok::{DispersionClass, OrderKParams};

use crate::config::{ExperimentConfig, Model, OutputFormat};
use crate::output::{float, Csv};
use crate::CliError;

/// Largest recursion/enumeration disagreement accepted by `pmf --oracle`.
pub const PMF_ORACLE_TOLERANCE: f64 = 1e-12;

/// `n, p_n` rows, with the enumeration oracle beside them when asked.
///
/// With `oracle`, a disagreement above [`PMF_ORACLE_TOLERANCE`] is returned
/// as [`CliError::Failed`] carrying the full table.
pub fn pmf(k: u32, lambda: f64, t: f64, nmax: usize, oracle: bool) -> Result<String, CliError> {
    let params = OrderKParams::new(k, lambda)?;
    let table = pok_pmf(&params, t, nmax)?;
    let mut csv = Csv::new();
    csv.meta("command", &format!("pmf k={k} lambda={lambda} t={t} nmax={nmax}"));
    let mut worst: f64 = 0.0;
    let mut rows = Vec::with_capacity(table.probs.len());
    for (n, &p) in table.probs.iter().enumerate() {
        let mut row = vec![n.to_string(), float(p, 17)];
        if oracle {
            let q = pok_pmf_enum(&params, t, n as u64)?;
            let diff = (p - q).abs();
            worst = worst.max(diff);
            row.push(float(q, 17));
            row.push(float(diff, 17));
        }
        rows.push(row);
    }
    if oracle {
        csv.meta("max_abs_diff", &float(worst, 17));
        csv.row(&["n", "p_n", "p_n_enum", "abs_diff"]);
    } else {
        csv.row(&["n", "p_n"]);
    }
    for row in &rows {
        csv.row(row);
    }
    let text = csv.finish();
    if oracle && !(worst < PMF_ORACLE_TOLERANCE) {
        return Err(CliError::Failed(text));
    }
    Ok(text)
}

/// Replicate values of the configured process on `mc.grid`.
pub fn sample_ensemble(model: &Model, mc: &MonteCarloConfig) -> Result<Ensemble, CliError> {
    Ok(match model {
        Model::Cppok { params, law } => run_grid_ensemble(mc, |g, rng| sample_cppok_grid(params, law, g, rng))?,
        Model::Z1(spec) => run_ensemble_raw(mc, |g, rng| sample_z1(spec, g, rng))?,
        Model::Z2(spec) => run_ensemble_raw(mc, |g, rng| sample_z2(spec, g, rng))?,
    })
}

/// Closed-form mean and variance at `t`, and a label for where they come from.
fn theory(model: &Model, t: f64) -> (f64, f64, &'static str) {
    let nan = (f64::NAN, f64::NAN);
    let (m, v) = match model {
        Model::Cppok { params, law } => (cppok_mean(params, law, t).ok(), cppok_variance(params, law, t).ok()),
        Model::Z1(spec) => (z1_mean(spec, t).ok(), z1_variance(spec, t).ok()),
        Model::Z2(spec) => {
            let a = z2_asymptotics(spec, t).ok();
            (a.map(|a| a.mean), a.map(|a| a.variance))
        }
    };
    let label = match (model, m.is_some()) {
        (_, false) => "unavailable (infinite moments)",
        (Model::Z2(_), true) => "large-t asymptote",
        _ => "exact",
    };
    (m.unwrap_or(nan.0), v.unwrap_or(nan.1), label)
}

fn header(config: &ExperimentConfig, model: &Model, command: &str) -> Csv {
    let mut csv = Csv::new();
    let (params, law) = model.base();
    csv.meta("command", command);
    csv.meta("config_hash", &config.hash());
    csv.meta("seed", &config.monte_carlo.master_seed.to_string());
    csv.meta("replicates", &config.monte_carlo.replicates.to_string());
    csv.meta(
        "process",
        &format!("{} k={} lambda={} jump={}", model.name(), params.k, params.lambda, law.describe()),
    );
    if let Some(clock) = &config.clock {
        let p = clock.params();
        csv.meta(
            "clock",
            &format!(
                "{} c1={} c2={} alpha1={} alpha2={} mu1={} mu2={}",
                if matches!(model, Model::Z2(_)) { "inverse_mtss" } else { "mtss" },
                p.c1,
                p.c2,
                p.alpha1,
                p.alpha2,
                p.mu1,
                p.mu2
            ),
        );
    }
    csv
}

/// Summary or raw-path CSV for a config file.
pub fn simulate(config: &ExperimentConfig, workers: usize) -> Result<String, CliError> {
    let model = config.model()?;
    let mc = config.monte_carlo(workers)?;
    let ensemble = sample_ensemble(&model, &mc)?;
    let prec = config.output.precision;
    let mut csv = header(config, &model, "simulate");
    match config.output.format {
        OutputFormat::Summary => {
            let s = ensemble.summary();
            let label = mc.grid.first().map_or("exact", |&t| theory(&model, t).2);
            csv.meta("theory", label);
            csv.row(&["t", "mean", "stderr_mean", "variance", "stderr_variance", "theory_mean", "theory_variance"]);
            for (j, &t) in s.grid.iter().enumerate() {
                let (tm, tv, _) = theory(&model, t);
                csv.row(&[
                    float(t, prec),
                    float(s.mean[j], prec),
                    float(s.stderr_mean[j], prec),
                    float(s.variance[j], prec),
                    float(s.stderr_variance[j], prec),
                    float(tm, prec),
                    float(tv, prec),
                ]);
            }
        }
        OutputFormat::Paths => {
            csv.row(&["replicate", "t", "value"]);
            for i in 0..ensemble.replicates() {
                for (j, &t) in ensemble.grid.iter().enumerate() {
                    csv.row(&[i.to_string(), float(t, prec), float(ensemble.columns[j][i], prec)]);
                }
            }
        }
    }
    Ok(csv.finish())
}

/// Dispersion report at `t`: exact when moments are finite, otherwise (or
/// on request) estimated from the configured ensemble.
pub fn dispersion(config: &ExperimentConfig, t: f64, empirical: bool, workers: usize) -> Result<String, CliError> {
    let model = config.model()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!(
            "the index of dispersion is undefined at t = {t}; pass a positive time"
        )));
    }
    let mut csv = header(config, &model, &format!("dispersion t={t}"));
    let p = 17;
    if empirical {
        let mut mc = config.monte_carlo(workers)?;
        mc.grid = vec![t];
        let values = sample_ensemble(&model, &mc)?;
        let s = scalar_summary(&values.columns[0]);
        let gap = s.variance - s.mean;
        // Var and mean are estimated from the same sample; the gap's error is
        // dominated by the variance estimate.
        let se = s.stderr_variance.hypot(s.stderr_mean);
        let class = if gap.abs() <= 4.0 * se {
            "indistinguishable from equi"
        } else {
            DispersionClass::from_gap(gap, EQUIDISPERSION_TOLERANCE).as_str()
        };
        csv.meta("source", "empirical");
        csv.row(&["quantity", "value"]);
        for (k, v) in [("mean", s.mean), ("variance", s.variance), ("gap", gap), ("stderr_gap", se)] {
            csv.row(&[k.to_string(), float(v, p)]);
        }
        csv.row(&["class", class]);
        return Ok(csv.finish());
    }
    csv.meta("source", "exact");
    csv.row(&["quantity", "value"]);
    match &model {
        Model::Cppok { params, law } => {
            let r = dispersion_report(params, law, t)?;
            for (k, v) in [("mean", r.mean), ("variance", r.variance), ("gap", r.gap), ("index", r.index)] {
                csv.row(&[k.to_string(), float(v, p)]);
            }
            csv.row(&["class", r.class.as_str()]);
        }
        Model::Z1(spec) => {
            let r = z1_dispersion_classify(spec, t).map_err(|e| match e {
                cppok::Error::InfiniteMoment(_) => CliError::Usage(
                    "the clock has a component with mu = 0, so E[S(t)] is infinite and the exact \
                     report does not exist; rerun with --empirical"
                        .into(),
                ),
                e => e.into(),
            })?;
            for (k, v) in [
                ("mean_s", r.mean_s),
                ("var_s", r.var_s),
                ("mean_z1", r.mean_z1),
                ("var_z1", r.var_z1),
                ("gap", r.gap),
            ] {
                csv.row(&[k.to_string(), float(v, p)]);
            }
            csv.row(&["base_class", r.base_class.as_str()]);
            csv.row(&["class", r.class.as_str()]);
        }
        Model::Z2(_) => {
            return Err(CliError::Usage(
                "the inverse clock has no closed-form moments; rerun with --empirical".into(),
            ))
        }
    }
    Ok(csv.finish())
}

/// Geometric grid `s, s·rmin, ..., s·rmax` with `points` values past `s`.
pub fn lrd_grid(s: f64, ratio_min: f64, ratio_max: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(s > 0.0 && 1.0 < ratio_min && ratio_min < ratio_max && points >= 2) {
        return Err(CliError::Usage(
            "need s > 0, 1 < ratio-min < ratio-max and at least 2 points".into(),
        ));
    }
    let mut grid = vec![s];
    let step = (ratio_max / ratio_min).ln() / (points - 1) as f64;
    grid.extend((0..points).map(|i| s * ratio_min * (step * i as f64).exp()));
    *grid.last_mut().unwrap() = s * ratio_max;
    Ok(grid)
}

fn fit_meta(csv: &mut Csv, fit: &PowerLawFit) {
    csv.meta("fit_exponent", &float(fit.exponent, 17));
    csv.meta("fit_intercept", &float(fit.intercept, 17));
    csv.meta("fit_r_squared", &float(fit.r_squared, 17));
    csv.meta("fit_range", &format!("{} {}", fit.fit_range.0, fit.fit_range.1));
    csv.meta("fit_points", &format!("{} used, {} trimmed", fit.points, fit.trimmed));
    csv.meta("verdict", fit.class.as_str());
}

/// Estimated `Corr[X(s), X(t)]` over a geometric grid of `t`, with the fitted
/// decay exponent.
pub fn lrd(config: &ExperimentConfig, grid: Vec<f64>, workers: usize) -> Result<(String, PowerLawFit), CliError> {
    let model = config.model()?;
    let mut mc = config.monte_carlo(workers)?;
    mc.grid = grid;
    let summary = sample_ensemble(&model, &mc)?.summary();
    let s = mc.grid[0];
    let times = &mc.grid[1..];
    let corr: Vec<f64> = (1..mc.grid.len()).map(|j| summary.correlation(0, j)).collect();
    let range = (times[0], *times.last().unwrap());
    let fit = fit_power_law(times, &corr, range).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = header(config, &model, &format!("lrd s={s}"));
    fit_meta(&mut csv, &fit);
    csv.row(&["t", "correlation", "theory_correlation"]);
    for (&t, &c) in times.iter().zip(&corr) {
        let theory = match &model {
            Model::Cppok { params, law } => cppok_correlation(params, law, s, t).unwrap_or(f64::NAN),
            Model::Z1(spec) => z1_correlation(spec, s, t).unwrap_or(f64::NAN),
            Model::Z2(_) => f64::NAN,
        };
        csv.row(&[float(t, 17), float(c, 17), float(theory, 17)]);
    }
    Ok((csv.finish(), fit))
}

/// Fits a power law to `t,value` rows; `#` lines and a non-numeric header
/// row are skipped.
pub fn lrd_from_csv(text: &str, range: Option<(f64, f64)>) -> Result<(String, PowerLawFit), CliError> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = (cells.first().map(|c| c.parse::<f64>()), cells.get(1).map(|c| c.parse::<f64>()));
        match parsed {
            (Some(Ok(t)), Some(Ok(v))) => {
                times.push(t);
                values.push(v);
            }
            _ if times.is_empty() => continue,
            _ => return Err(CliError::Usage(format!("line {}: expected `t,value`", lineno + 1))),
        }
    }
    let range = match range {
        Some(r) => r,
        None => {
            let lo = times.iter().copied().filter(|&t| t > 0.0).fold(f64::INFINITY, f64::min);
            let hi = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
    };
    let fit = fit_power_law(&times, &values, range).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = Csv::new();
    csv.meta("command", "lrd --from-csv");
    fit_meta(&mut csv, &fit);
    csv.row(&["quantity", "value"]);
    csv.row(&["exponent".to_string(), float(fit.exponent, 17)]);
    csv.row(&["r_squared".to_string(), float(fit.r_squared, 17)]);
    csv.row(&["verdict", fit.class.as_str()]);
    Ok((csv.finish(), fit))
}
