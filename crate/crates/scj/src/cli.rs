//! The `scj` command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{load_config_for, ConfigError, Engine, ExperimentConfig, Mode};
use crate::output::{write_optimize, write_sweep};
use crate::run::{run_optimize, run_sweep, run_validate};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    /// Some analytic value is off its simulation beyond tolerance.
    Tolerance = 1,
    Config = 2,
    /// A model evaluation failed.
    Numeric = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Parser)]
#[command(name = "scj", version, about = "Connection, secrecy and STC of sight-based cooperative jamming")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare analytic values with simulation at every grid point.
    Validate(RunArgs),
    /// Evaluate a parameter grid.
    Sweep(RunArgs),
    /// Maximise STC over the jamming parameters.
    Optimize(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "SCJ_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (default: logical cores).
    #[arg(long, env = "SCJ_THREADS")]
    pub threads: Option<usize>,
    /// Monte Carlo trials for both probabilities.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, value_enum)]
    pub engine: Option<Engine>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

impl Command {
    fn parts(&self) -> (Mode, &RunArgs) {
        match self {
            Command::Validate(a) => (Mode::Validate, a),
            Command::Sweep(a) => (Mode::Sweep, a),
            Command::Optimize(a) => (Mode::Optimize, a),
        }
    }
}

/// The config with command-line overrides applied.
pub fn resolve(mode: Mode, args: &RunArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut config = load_config_for(&args.config, mode)?;
    let invalid = |key: &str, message: &str| ConfigError::Invalid { key: key.into(), message: message.into() };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(invalid("--trials", "must be at least 1"));
        }
        config.trials = trials;
        config.secrecy_trials = trials;
    }
    if let Some(engine) = args.engine {
        if mode == Mode::Validate && engine != Engine::Both {
            return Err(invalid("--engine", "validate always runs both engines"));
        }
        config.engine = engine;
    }
    if let Some(tol) = args.tolerance {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(invalid("--tolerance", "must be positive and finite"));
        }
        config.tolerance = tol;
    }
    if args.out.is_some() {
        config.output = args.out.clone();
    }
    if args.threads == Some(0) {
        return Err(invalid("--threads", "must be at least 1"));
    }
    Ok(config)
}

fn sink(config: &ExperimentConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(config: &ExperimentConfig) -> io::Result<Status> {
    let mut out = sink(config)?;
    let status = match config.mode {
        Mode::Validate | Mode::Sweep => {
            let report = if config.mode == Mode::Validate { run_validate(config) } else { run_sweep(config) };
            write_sweep(config, &report, &mut out)?;
            let (failed, off) = (report.failed_rows(), report.out_of_tolerance());
            eprintln!("scj: {} rows, {failed} failed, {off} out of tolerance", report.rows.len());
            if failed > 0 {
                Status::Numeric
            } else if off > 0 {
                Status::Tolerance
            } else {
                Status::Success
            }
        }
        Mode::Optimize => match run_optimize(config) {
            Ok(report) => {
                write_optimize(config, &report, &mut out)?;
                let failed = report.failed_rows();
                eprintln!("scj: {} points, {failed} failed", report.rows.len());
                if failed > 0 {
                    Status::Numeric
                } else {
                    Status::Success
                }
            }
            Err(e) => {
                eprintln!("scj: {e}");
                Status::Numeric
            }
        },
    };
    out.flush()?;
    Ok(status)
}

pub fn main(cli: Cli) -> ExitCode {
    let (mode, args) = cli.command.parts();
    let config = match resolve(mode, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("scj: config error: {e}");
            return Status::Config.into();
        }
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("scj: cannot size the worker pool: {e}");
        }
    }
    match execute(&config) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("scj: cannot write output: {e}");
            Status::Config.into()
        }
    }
}
