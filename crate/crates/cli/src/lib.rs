//! Library side of the `cppok` command-line tool.
//!
//! Every subcommand renders its whole output to a `String` so the binary,
//! the integration tests and the determinism check all share one code path.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use cppok::JumpLaw;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid configuration.
    #[error("{0}")]
    Usage(String),
    /// A requested check ran and did not pass.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Failed(_) => 1,
        }
    }
}

impl From<cppok::Error> for CliError {
    fn from(e: cppok::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

/// Parses `dirac:P`, `exponential:RATE` or `discrete:q0,q1,...`.
pub fn parse_jump(text: &str) -> Result<JumpLaw, CliError> {
    let (kind, args) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("jump law `{text}` must look like kind:args")))?;
    let numbers = args
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("jump law `{text}`: {e}")))?;
    let one = || match numbers.as_slice() {
        [v] => Ok(*v),
        _ => Err(CliError::Usage(format!("jump law `{text}` takes one number"))),
    };
    Ok(match kind {
        "dirac" => JumpLaw::dirac(one()?)?,
        "exponential" => JumpLaw::exponential(one()?)?,
        "discrete" => JumpLaw::discrete(numbers)?,
        _ => return Err(CliError::Usage(format!("unknown jump law `{kind}`"))),
    })
}
