use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cppok_cli::commands;
use cppok_cli::config::{default_workers, ExperimentConfig, MonteCarloSection, ProcessSection};
use cppok_cli::verify::{run_criterion, suite_ids, Targets};
use cppok_cli::{parse_jump, CliError};

#[derive(Parser)]
#[command(name = "cppok", version, about = "Compound Poisson processes of order k and their time changes")]
struct Cli {
    /// Worker threads for Monte Carlo runs (results do not depend on it).
    #[arg(long, global = true, env = "CPPOK_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Poisson distribution of order k by recursion.
    Pmf {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        nmax: usize,
        /// Cross-check every row against direct enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo ensemble from a config file.
    Simulate {
        config: PathBuf,
        /// Overrides `output.path`.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Over/under/equi-dispersion at time t.
    Dispersion {
        /// Config file; alternatively give --k, --lambda and --jump.
        #[arg(long, conflicts_with_all = ["k", "lambda", "jump"])]
        config: Option<PathBuf>,
        #[arg(long, requires_all = ["lambda", "jump"])]
        k: Option<u32>,
        #[arg(long)]
        lambda: Option<f64>,
        /// `dirac:P`, `exponential:RATE` or `discrete:q0,q1,...`
        #[arg(long)]
        jump: Option<String>,
        #[arg(long)]
        t: f64,
        /// Estimate from the config's Monte Carlo settings instead of formulas.
        #[arg(long)]
        empirical: bool,
    },
    /// Correlation decay Corr[X(s), X(t)] and its power-law fit.
    Lrd {
        #[arg(long, required_unless_present = "from_csv")]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 10.0)]
        ratio_min: f64,
        #[arg(long, default_value_t = 1000.0)]
        ratio_max: f64,
        #[arg(long, default_value_t = 13)]
        points: usize,
        /// Fit `t,value` rows from a file instead of simulating.
        #[arg(long, conflicts_with = "config")]
        from_csv: Option<PathBuf>,
        /// Fit range `tmin,tmax` for --from-csv.
        #[arg(long, value_parser = parse_range)]
        range: Option<(f64, f64)>,
    },
    /// Run acceptance suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or("expected tmin,tmax")?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let workers = cli.workers.filter(|&w| w > 0).unwrap_or_else(default_workers);
    match cli.command {
        Command::Pmf {
            k,
            lambda,
            t,
            nmax,
            oracle,
            output,
        } => match commands::pmf(k, lambda, t, nmax, oracle) {
            Ok(text) => emit(&text, output.as_ref()),
            Err(CliError::Failed(text)) => {
                emit(&text, output.as_ref())?;
                Err(CliError::Failed("recursion and enumeration disagree beyond 1e-12".into()))
            }
            Err(e) => Err(e),
        },
        Command::Simulate { config, output } => {
            let config = ExperimentConfig::load(&config)?;
            let text = commands::simulate(&config, workers)?;
            emit(&text, output.as_ref().or(config.output.path.as_ref()))
        }
        Command::Dispersion {
            config,
            k,
            lambda,
            jump,
            t,
            empirical,
        } => {
            let config = match (config, k, lambda, jump) {
                (Some(path), ..) => ExperimentConfig::load(&path)?,
                (None, Some(k), Some(lambda), Some(jump)) => {
                    if empirical {
                        return Err(CliError::Usage("--empirical needs a config with a [monte_carlo] section".into()));
                    }
                    ExperimentConfig {
                        process: ProcessSection {
                            k,
                            lambda,
                            jump: parse_jump(&jump)?,
                        },
                        clock: None,
                        monte_carlo: MonteCarloSection {
                            replicates: 1,
                            master_seed: 0,
                            workers: None,
                            grid: vec![t.max(0.0)],
                        },
                        output: Default::default(),
                    }
                }
                _ => return Err(CliError::Usage("give --config or all of --k, --lambda, --jump".into())),
            };
            emit(&commands::dispersion(&config, t, empirical, workers)?, None)
        }
        Command::Lrd {
            config,
            s,
            ratio_min,
            ratio_max,
            points,
            from_csv,
            range,
        } => {
            let text = if let Some(path) = from_csv {
                let data = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                commands::lrd_from_csv(&data, range)?.0
            } else {
                let config = ExperimentConfig::load(config.as_ref().expect("clap enforces --config"))?;
                let grid = commands::lrd_grid(s, ratio_min, ratio_max, points)?;
                commands::lrd(&config, grid, workers)?.0
            };
            emit(&text, None)
        }
        Command::Verify { suite } => {
            let ids = suite_ids(&suite)?;
            let targets = Targets::builtin();
            let mut failed = 0;
            for id in ids {
                let outcome = run_criterion(id, &targets, workers);
                println!("{}", outcome.line());
                failed += usize::from(!outcome.passed);
            }
            if failed > 0 {
                return Err(CliError::Failed(format!("{failed} criterion(s) failed")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cppok: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
