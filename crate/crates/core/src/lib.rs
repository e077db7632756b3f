//! Compound Poisson processes of order `k`, their time changes by mixtures of
//! tempered stable subordinators and by the inverse of such a subordinator,
//! together with the Monte Carlo machinery used to check every closed form.
//!
//! The crate is organised bottom-up:
//!
//! * [`orderk`]: exact pmf/pgf/moment formulas and path samplers for the
//!   order-`k` Poisson and compound Poisson processes.
//! * [`subordinators`]: stable, tempered stable and mixture subordinators and
//!   their first-passage (inverse) clocks.
//! * [`timechange`]: the subordinated processes `Z(S(t))` and `Z(E(t))`.
//! * [`stats`]: deterministic parallel ensembles and the estimators that turn
//!   simulated paths into verdicts.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod numeric;
pub mod orderk;
pub mod stats;
pub mod subordinators;
pub mod timechange;

pub use error::{Error, Result};
pub use orderk::{DispersionClass, JumpLaw, OrderKParams, ProcessPath};
pub use subordinators::MtssParams;
pub use timechange::{Clock, TimeChangedSpec};


