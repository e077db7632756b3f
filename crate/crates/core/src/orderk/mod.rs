//! Poisson and compound Poisson processes of order `k`.

mod law;
mod levy;
mod marginal;
mod moments;
mod path;
mod pmf;

pub use law::{ContinuousJump, DiscreteLaw, JumpLaw, OrderKParams, PMF_SUM_TOLERANCE};
pub use levy::{
    levy_measure_weights, levy_measure_weights_auto, pgf_from_weights, superposition_sample,
    LevyMeasureWeights, Superposition, WEIGHT_TAIL_TOLERANCE,
};
pub use marginal::marginal_cdf;
pub use moments::{
    cppok_correlation, cppok_covariance, cppok_mean, cppok_pgf, cppok_variance, dispersion_report, jump_pgf, DispersionClass,
    DispersionReport, EQUIDISPERSION_TOLERANCE,
};
pub use path::{
    compensator, martingale_residual, sample_cppok_grid, sample_cppok_increment, sample_cppok_path,
    sample_order_k_count, sample_ppok_path, ProcessPath, MAX_LOOPED_JUMPS,
};
pub use pmf::{
    composition_count, pok_pmf, pok_pmf_auto, pok_pmf_enum, pok_pmf_to_tolerance, PokPmfTable,
    ENUMERATION_BUDGET, TAIL_TOLERANCE,
};
