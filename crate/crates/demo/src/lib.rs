//! WebAssembly bindings behind `www/index.html`.
//!
//! Each export is a thin wrapper over a plain function of the same name in
//! [`ops`], so the numerics can be tested natively.

use wasm_bindgen::prelude::*;

pub mod ops;

fn js(e: cppok::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `P[N(t) = n]` for `n = 0..=nmax`.
#[wasm_bindgen]
pub fn pmf(k: u32, lambda: f64, t: f64, nmax: usize) -> Result<Vec<f64>, JsError> {
    ops::pmf(k, lambda, t, nmax).map_err(js)
}

/// `paths` sampled paths at `points` equally spaced times in `(0, tmax]`,
/// flattened path by path. `kind` is `cppok`, `z1` or `z2`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn sample_paths(
    kind: &str,
    k: u32,
    lambda: f64,
    jump_rate: f64,
    alpha: f64,
    mu: f64,
    tmax: f64,
    points: usize,
    paths: usize,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    let model = ops::Model::new(kind, k, lambda, jump_rate, alpha, mu).map_err(js)?;
    ops::sample_paths(&model, tmax, points, paths, seed).map_err(js)
}

/// Theoretical mean on the same grid as [`sample_paths`]; the large-`t`
/// asymptote for `z2`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn mean_curve(
    kind: &str,
    k: u32,
    lambda: f64,
    jump_rate: f64,
    alpha: f64,
    mu: f64,
    tmax: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    let model = ops::Model::new(kind, k, lambda, jump_rate, alpha, mu).map_err(js)?;
    ops::mean_curve(&model, tmax, points).map_err(js)
}

/// `Var[Z(t)] - E[Z(t)]` for exponential jumps at `points` rates spanning
/// `[rate_min, rate_max]`.
#[wasm_bindgen]
pub fn dispersion_gaps(k: u32, lambda: f64, t: f64, rate_min: f64, rate_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    ops::dispersion_gaps(k, lambda, t, rate_min, rate_max, points).map_err(js)
}

/// Exponential rate at which the gap changes sign.
#[wasm_bindgen]
pub fn threshold_rate(k: u32) -> f64 {
    ops::threshold_rate(k)
}
