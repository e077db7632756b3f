//! Acceptance checks, grouped into named suites.
//!
//! Each check compares simulation or recursion output against a target
//! supplied through [`Targets`]. The built-in targets are written out from
//! elementary arithmetic rather than through the library's own moment
//! functions, so a wrong formula in the library cannot agree with itself.

use std::time::Instant;

use cppok::orderk::{
    compensator, dispersion_report, pok_pmf, pok_pmf_enum, sample_cppok_grid, sample_cppok_path,
    Superposition,
};
use cppok::stats::{
    fit_power_law, map_replicates, martingale_increment_test, run_ensemble_raw, run_grid_ensemble, scalar_summary,
    two_sample_pmf_test, MonteCarloConfig,
};
use cppok::subordinators::MtssParams;
use cppok::timechange::{sample_z1, sample_z2, z2_variance_slope_renewal};
use cppok::{Clock, DispersionClass, JumpLaw, OrderKParams, TimeChangedSpec};

use crate::commands::lrd_grid;
use crate::config::{ExperimentConfig, MonteCarloSection, OutputSection, ProcessSection};
use crate::CliError;

/// Suite names in criterion order.
pub const SUITES: [&str; 10] = [
    "pmf",
    "moments",
    "dispersion",
    "superposition",
    "martingale",
    "lrd",
    "mtss",
    "z1cov",
    "asymptotics",
    "determinism",
];

/// Number of standard errors allowed between estimate and target.
pub const SE_MULTIPLIER: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: usize,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {:<13} {:.1}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.suite,
            self.seconds,
            self.detail
        )
    }
}

/// Reference values the checks compare against.
#[derive(Clone, Copy)]
pub struct Targets {
    /// `P[N^(k)(t) = n]` as a function of `(k, λt, n)`.
    pub pmf: fn(u32, f64, u64) -> f64,
    /// `(E, Var)` of the reference compound process at `t`.
    pub reference_moments: fn(f64) -> (f64, f64),
    /// Exponential rate at which `k = 1` dispersion changes sign.
    pub threshold_rate: f64,
    /// `(E[S(1)], Var[S(1)])` of the reference mixture clock.
    pub mtss_moments: (f64, f64),
    /// `E[exp(-s S(1))]` of the reference mixture clock.
    pub mtss_laplace: fn(f64) -> f64,
    /// `Cov[Z1(1), Z1(2)]` for the reference base and clock.
    pub z1_cov: f64,
    /// Large-`t` slopes `(E[Z2(t)]/t, Var[Z2(t)]/t)` as stated for the
    /// single-component clock.
    pub z2_slopes: (f64, f64),
}

fn builtin_pmf(k: u32, lt: f64, n: u64) -> f64 {
    pok_pmf_enum(&OrderKParams::new(k, lt).expect("valid"), 1.0, n).expect("within enumeration budget")
}

fn reference_mtss_moments() -> (f64, f64) {
    // c α μ^{α-1} and c α (1-α) μ^{α-2} per component
    let mean = 0.6 * 0.5 + 0.4 * 0.7 * 2f64.powf(-0.3);
    let var = 0.6 * 0.5 * 0.5 + 0.4 * 0.7 * 0.3 * 2f64.powf(-1.3);
    (mean, var)
}

impl Targets {
    pub fn builtin() -> Self {
        Self {
            pmf: builtin_pmf,
            // Var(Y) = E[Y]² = 1: mean 3t, variance 3t + 5t
            reference_moments: |t| (3.0 * t, 8.0 * t),
            threshold_rate: 2.0,
            mtss_moments: reference_mtss_moments(),
            mtss_laplace: |s| (-(0.6 * ((s + 1.0).sqrt() - 1.0) + 0.4 * ((s + 2.0).powf(0.7) - 2f64.powf(0.7)))).exp(),
            // E[Z(1)]² Var[S(1)] + E[S(1)] Var[Z(1)] with E[Z(1)] = 3, Var[Z(1)] = 8
            z1_cov: 9.0 * reference_mtss_moments().1 + 8.0 * reference_mtss_moments().0,
            // k = 1, Dirac(1): E[Z(1)] = Var[Z(1)] = 1 over E[S(1)] = 1/2
            z2_slopes: (2.0, 2.0),
        }
    }
}

fn reference_base() -> (OrderKParams, JumpLaw) {
    (OrderKParams::new(2, 1.0).unwrap(), JumpLaw::exponential(1.0).unwrap())
}

/// `c1 = 0.6, c2 = 0.4, α = (0.5, 0.7), μ = (1, 2)`.
pub fn reference_clock() -> MtssParams {
    MtssParams::new(0.6, 0.4, 0.5, 0.7, 1.0, 2.0).unwrap()
}

fn within(estimate: f64, target: f64, se: f64) -> bool {
    (estimate - target).abs() <= SE_MULTIPLIER * se
}

fn budget(elapsed: f64, limit: f64, passed: bool, detail: String) -> (bool, String) {
    if elapsed > limit {
        (false, format!("{detail}; runtime {elapsed:.1}s over the {limit}s budget"))
    } else {
        (passed, detail)
    }
}

type Check = Result<(bool, String), CliError>;

fn pmf_oracle(t: &Targets) -> Check {
    let mut worst: f64 = 0.0;
    for k in 1..=5 {
        for lt in [0.5, 1.0, 2.0, 4.0] {
            let table = pok_pmf(&OrderKParams::new(k, lt)?, 1.0, 30)?;
            for (n, p) in table.probs.iter().enumerate() {
                worst = worst.max((p - (t.pmf)(k, lt, n as u64)).abs());
            }
        }
    }
    Ok((worst < 1e-12, format!("max |recursion - oracle| = {worst:.2e} (< 1e-12)")))
}

fn moments(t: &Targets, workers: usize) -> Check {
    let (params, law) = reference_base();
    let mc = MonteCarloConfig::new(1_000_000, 0x0c0f_fee1, workers, vec![0.5, 1.0, 2.0])?;
    let s = run_grid_ensemble(&mc, |g, rng| sample_cppok_grid(&params, &law, g, rng))?.summary();
    let mut ok = true;
    let mut parts = Vec::new();
    for (j, &time) in s.grid.iter().enumerate() {
        let (m, v) = (t.reference_moments)(time);
        let good = within(s.mean[j], m, s.stderr_mean[j]) && within(s.variance[j], v, s.stderr_variance[j]);
        ok &= good;
        parts.push(format!(
            "t={time}: mean {:.4}/{m} ({:+.1} se), var {:.4}/{v} ({:+.1} se)",
            s.mean[j],
            (s.mean[j] - m) / s.stderr_mean[j],
            s.variance[j],
            (s.variance[j] - v) / s.stderr_variance[j]
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn dispersion_threshold(t: &Targets) -> Check {
    let params = OrderKParams::new(1, 1.0)?;
    let class = |rate: f64| -> Result<(f64, DispersionClass), CliError> {
        let r = dispersion_report(&params, &JumpLaw::exponential(rate)?, 1.0)?;
        Ok((r.gap, r.class))
    };
    let (_, at1) = class(1.0)?;
    let (_, at3) = class(3.0)?;
    let (gap_at, _) = class(t.threshold_rate)?;
    let (below, _) = class(t.threshold_rate * (1.0 - 1e-9))?;
    let (above, _) = class(t.threshold_rate * (1.0 + 1e-9))?;
    let formula = (2.0 * 1.0 + 4.0) / 3.0;
    let ok = at1 == DispersionClass::Over
        && at3 == DispersionClass::Under
        && gap_at == 0.0
        && below > 0.0
        && above < 0.0
        && formula == t.threshold_rate;
    Ok((
        ok,
        format!("mu=1 {at1}, mu=3 {at3}, gap at mu={} is {gap_at:e}, flips from {below:+.1e} to {above:+.1e}", t.threshold_rate),
    ))
}

fn superposition(workers: usize) -> Check {
    let params = OrderKParams::new(2, 1.0)?;
    let law = JumpLaw::dirac(1.0)?;
    let n = 1_000_000;
    let direct = map_replicates(n, 0x5e9e_0001, workers, |_, rng| {
        Ok(sample_cppok_path(&params, &law, 1.0, rng)?.terminal() as u64)
    })?;
    let sup = Superposition::from_law(&params, &law)?;
    let built = map_replicates(n, 0x5e9e_0002, workers, |_, rng| sup.sample(1.0, rng))?;
    let r = two_sample_pmf_test(&direct, &built)?;
    Ok((
        r.chi2_pvalue > 0.01,
        format!("chi2 = {:.2} on {} dof, p = {:.4} (> 0.01), tv = {:.2e}", r.chi2_statistic, r.degrees_of_freedom, r.chi2_pvalue, r.tv_distance),
    ))
}

fn martingale(workers: usize) -> Check {
    let (params, law) = reference_base();
    let mc = MonteCarloConfig::new(200_000, 0x3a27_1a1e, workers, vec![0.5, 1.0, 2.0, 4.0])?;
    let e = run_ensemble_raw(&mc, |g, rng| sample_cppok_path(&params, &law, *g.last().unwrap(), rng))?;
    let pairs = [(0.5, 1.0), (1.0, 2.0), (2.0, 4.0)];
    let good = martingale_increment_test(&e, &pairs, |t| compensator(&params, &law, t))?;
    let bad = martingale_increment_test(&e, &pairs, |t| 0.5 * compensator(&params, &law, t))?;
    let ok = good.iter().all(|c| c.contains_zero) && bad.iter().all(|c| !c.contains_zero);
    let show = |cs: &[cppok::stats::IncrementInterval]| {
        cs.iter()
            .map(|c| format!("({},{}) [{:+.3},{:+.3}]", c.s, c.t, c.lower, c.upper))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok((ok, format!("compensated {}; halved {}", show(&good), show(&bad))))
}

fn lrd(workers: usize) -> Check {
    let (params, law) = reference_base();
    let grid = lrd_grid(1.0, 10.0, 1000.0, 13)?;
    let mut ok = true;
    let mut parts = Vec::new();
    let z1 = TimeChangedSpec::new(params, law.clone(), Clock::Mtss(reference_clock()))?;
    for name in ["cppok", "z1"] {
        let started = Instant::now();
        let mc = MonteCarloConfig::new(100_000, 0x01d0_0006, workers, grid.clone())?;
        let e = if name == "cppok" {
            run_grid_ensemble(&mc, |g, rng| sample_cppok_grid(&params, &law, g, rng))?
        } else {
            run_ensemble_raw(&mc, |g, rng| sample_z1(&z1, g, rng))?
        };
        let s = e.summary();
        let corr: Vec<f64> = (1..grid.len()).map(|j| s.correlation(0, j)).collect();
        let fit = fit_power_law(&grid[1..], &corr, (10.0, 1000.0))?;
        let (good, detail) = budget(
            started.elapsed().as_secs_f64(),
            300.0,
            (-0.6..=-0.4).contains(&fit.exponent) && fit.r_squared > 0.95,
            format!("{name}: exponent {:.4}, r2 {:.4}, {}", fit.exponent, fit.r_squared, fit.class.as_str()),
        );
        ok &= good;
        parts.push(detail);
    }
    Ok((ok, parts.join("; ")))
}

fn mtss(t: &Targets, workers: usize) -> Check {
    let clock = reference_clock();
    let xs = map_replicates(1_000_000, 0x0007_5555, workers, |_, rng| Ok(clock.sample_increment(1.0, rng)))?;
    let s = scalar_summary(&xs);
    let (m, v) = t.mtss_moments;
    let mut ok = within(s.mean, m, s.stderr_mean) && within(s.variance, v, s.stderr_variance);
    let mut parts = vec![format!(
        "mean {:.5}/{m:.5} ({:+.1} se), var {:.5}/{v:.5} ({:+.1} se)",
        s.mean,
        (s.mean - m) / s.stderr_mean,
        s.variance,
        (s.variance - v) / s.stderr_variance
    )];
    for u in [0.5, 1.0, 2.0] {
        let lt: Vec<f64> = xs.iter().map(|x| (-u * x).exp()).collect();
        let e = scalar_summary(&lt);
        let want = (t.mtss_laplace)(u);
        ok &= within(e.mean, want, e.stderr_mean);
        parts.push(format!("LT({u}) {:+.1} se", (e.mean - want) / e.stderr_mean));
    }
    Ok((ok, parts.join(", ")))
}

fn z1_covariance(t: &Targets, workers: usize) -> Check {
    let (params, law) = reference_base();
    let spec = TimeChangedSpec::new(params, law, Clock::Mtss(reference_clock()))?;
    let mc = MonteCarloConfig::new(1_000_000, 0x21c0_0008, workers, vec![1.0, 2.0])?;
    let s = run_ensemble_raw(&mc, |g, rng| sample_z1(&spec, g, rng))?.summary();
    let (c, se) = (s.covariance[0][1], s.stderr_covariance[0][1]);
    Ok((
        within(c, t.z1_cov, se),
        format!("Cov[Z1(1),Z1(2)] = {c:.4} vs {:.4} ({:+.1} se)", t.z1_cov, (c - t.z1_cov) / se),
    ))
}

fn asymptotics(t: &Targets, workers: usize) -> Check {
    let spec = TimeChangedSpec::new(
        OrderKParams::new(1, 1.0)?,
        JumpLaw::dirac(1.0)?,
        Clock::InverseMtss {
            params: MtssParams::single(0.5, 1.0)?,
            step: Some(0.05),
        },
    )?;
    let horizon = 50.0;
    let mc = MonteCarloConfig::new(100_000, 0xa5b0_0009, workers, vec![horizon])?;
    let e = run_ensemble_raw(&mc, |g, rng| sample_z2(&spec, g, rng))?;
    let s = scalar_summary(&e.columns[0]);
    let (mean_slope, var_slope) = (s.mean / horizon, s.variance / horizon);
    let (want_mean, want_var) = t.z2_slopes;
    let mean_ok = ((mean_slope - want_mean) / want_mean).abs() <= 0.05;
    let var_ok = ((var_slope - want_var) / want_var).abs() <= 0.10;
    Ok((
        mean_ok && var_ok,
        format!(
            "E[Z2(50)]/50 = {mean_slope:.4} vs {want_mean} ({}), Var[Z2(50)]/50 = {var_slope:.4} \
             (se {:.3}) vs {want_var} ({}); renewal slope {:.4}",
            if mean_ok { "ok" } else { "off" },
            s.stderr_variance / horizon,
            if var_ok { "ok" } else { "off" },
            z2_variance_slope_renewal(&spec)?
        ),
    ))
}

/// Config used by the determinism check: a mixture-clocked process, whose
/// sampler exercises every random component.
pub fn determinism_config() -> ExperimentConfig {
    let (params, law) = reference_base();
    ExperimentConfig {
        process: ProcessSection {
            k: params.k,
            lambda: params.lambda,
            jump: law,
        },
        clock: Some(Clock::Mtss(reference_clock())),
        monte_carlo: MonteCarloSection {
            replicates: 20_000,
            master_seed: 20_240_610,
            workers: None,
            grid: vec![0.5, 1.0, 2.0, 4.0],
        },
        output: OutputSection::default(),
    }
}

fn determinism() -> Check {
    let config = determinism_config();
    let a = crate::commands::simulate(&config, 1)?;
    let b = crate::commands::simulate(&config, 1)?;
    let c = crate::commands::simulate(&config, 4)?;
    Ok((
        a == b && a == c,
        format!(
            "repeat {}, workers 1 vs 4 {} ({} bytes)",
            if a == b { "identical" } else { "differs" },
            if a == c { "identical" } else { "differs" },
            a.len()
        ),
    ))
}

/// Runs criterion `id` (1-based) against `targets`.
pub fn run_criterion(id: usize, targets: &Targets, workers: usize) -> Outcome {
    let started = Instant::now();
    let (limit, result) = match id {
        1 => (10.0, pmf_oracle(targets)),
        2 => (120.0, moments(targets, workers)),
        3 => (1.0, dispersion_threshold(targets)),
        4 => (120.0, superposition(workers)),
        5 => (120.0, martingale(workers)),
        6 => (600.0, lrd(workers)),
        7 => (60.0, mtss(targets, workers)),
        8 => (180.0, z1_covariance(targets, workers)),
        9 => (300.0, asymptotics(targets, workers)),
        10 => (60.0, determinism()),
        _ => (0.0, Err(CliError::Usage(format!("no criterion {id}")))),
    };
    let seconds = started.elapsed().as_secs_f64();
    let (passed, detail) = match result {
        Ok((passed, detail)) => budget(seconds, limit, passed, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome {
        id,
        suite: SUITES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
        seconds,
    }
}

/// Criterion ids selected by a suite name, `all` selecting every one.
pub fn suite_ids(name: &str) -> Result<Vec<usize>, CliError> {
    if name == "all" {
        return Ok((1..=SUITES.len()).collect());
    }
    SUITES
        .iter()
        .position(|&s| s == name)
        .map(|i| vec![i + 1])
        .ok_or_else(|| CliError::Usage(format!("unknown suite `{name}`; available: {}, all", SUITES.join(", "))))
}
