//! Experiment files.
//!
//! ```toml
//! [process]
//! k = 2
//! lambda = 1.0
//! jump = { kind = "exponential", rate = 1.0 }
//!
//! [clock]                 # optional; omit for the untimed process
//! kind = "mtss"           # or "inverse_mtss", which also takes `step`
//! c1 = 0.6
//! c2 = 0.4
//! alpha1 = 0.5
//! alpha2 = 0.7
//! mu1 = 1.0
//! mu2 = 2.0
//!
//! [monte_carlo]
//! replicates = 10000
//! master_seed = 42
//! grid = [0.5, 1.0, 2.0]
//!
//! [output]                # optional
//! format = "summary"      # or "paths"
//! precision = 17
//! ```

use std::path::{Path, PathBuf};

use cppok::stats::MonteCarloConfig;
use cppok::{Clock, JumpLaw, OrderKParams, TimeChangedSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "CPPOK_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSection {
    pub k: u32,
    pub lambda: f64,
    pub jump: JumpLaw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSection {
    pub replicates: u64,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Summary,
    Paths,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default = "default_precision")]
    pub precision: usize,
}

fn default_precision() -> usize {
    17
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            format: OutputFormat::Summary,
            path: None,
            precision: default_precision(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub process: ProcessSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock: Option<Clock>,
    pub monte_carlo: MonteCarloSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// The process a config describes.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Cppok { params: OrderKParams, law: JumpLaw },
    Z1(TimeChangedSpec),
    Z2(TimeChangedSpec),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Cppok { .. } => "cppok",
            Self::Z1(_) => "z1",
            Self::Z2(_) => "z2",
        }
    }

    pub fn base(&self) -> (&OrderKParams, &JumpLaw) {
        match self {
            Self::Cppok { params, law } => (params, law),
            Self::Z1(s) | Self::Z2(s) => (&s.base, &s.law),
        }
    }
}

fn field(section: &str, e: cppok::Error) -> CliError {
    CliError::Usage(format!("[{section}] {e}"))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model()?;
        self.monte_carlo(1)?;
        if !(1..=17).contains(&self.output.precision) {
            return Err(CliError::Usage("[output] precision must lie in 1..=17".into()));
        }
        Ok(())
    }

    pub fn model(&self) -> Result<Model, CliError> {
        let params = OrderKParams::new(self.process.k, self.process.lambda).map_err(|e| field("process", e))?;
        let law = self.process.jump.clone();
        law.validate().map_err(|e| field("process.jump", e))?;
        Ok(match self.clock {
            None => Model::Cppok { params, law },
            Some(clock) => {
                let spec = TimeChangedSpec::new(params, law, clock).map_err(|e| field("clock", e))?;
                match clock {
                    Clock::Mtss(_) => Model::Z1(spec),
                    Clock::InverseMtss { .. } => Model::Z2(spec),
                }
            }
        })
    }

    /// Monte Carlo settings with `workers` used when the file names none.
    pub fn monte_carlo(&self, default_workers: usize) -> Result<MonteCarloConfig, CliError> {
        let mc = &self.monte_carlo;
        MonteCarloConfig::new(
            mc.replicates,
            mc.master_seed,
            mc.workers.unwrap_or(default_workers),
            mc.grid.clone(),
        )
        .map_err(|e| field("monte_carlo", e))
    }

    /// Hash of everything that affects results; worker count and output
    /// path are excluded.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.monte_carlo.workers = None;
        canonical.output.path = None;
        let text = toml::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Worker count from [`WORKERS_ENV`], falling back to the available cores.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
[process]
k = 2
lambda = 1.0
jump = { kind = "exponential", rate = 1.0 }

[monte_carlo]
replicates = 100
master_seed = 42
grid = [0.5, 1.0]
"#;

    #[test]
    fn parses_and_defaults() {
        let c = ExperimentConfig::from_toml(BASIC).unwrap();
        assert_eq!(c.output.format, OutputFormat::Summary);
        assert_eq!(c.output.precision, 17);
        assert!(matches!(c.model().unwrap(), Model::Cppok { .. }));
        assert_eq!(c.monte_carlo(3).unwrap().workers, 3);
    }

    #[test]
    fn clock_selects_the_model() {
        let text = format!("{BASIC}\n[clock]\nkind = \"inverse_mtss\"\nc1 = 1.0\nc2 = 0.0\nalpha1 = 0.5\nalpha2 = 0.5\nmu1 = 1.0\nmu2 = 1.0\nstep = 0.1\n");
        let c = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(c.model().unwrap().name(), "z2");
    }

    #[test]
    fn hash_ignores_workers_but_not_seed() {
        let a = ExperimentConfig::from_toml(BASIC).unwrap();
        let mut b = a.clone();
        b.monte_carlo.workers = Some(8);
        assert_eq!(a.hash(), b.hash());
        b.monte_carlo.master_seed = 43;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = BASIC.replace("k = 2", "k = 0");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("[process]") && err.contains('k'), "{err}");
        let bad = BASIC.replace("grid = [0.5, 1.0]", "grid = []");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("grid"));
        let bad = BASIC.replace("replicates", "replicatez");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("replicatez"));
    }
}
