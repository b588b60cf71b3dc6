//! Batch front end for `sclego-core`: argument model, command runners and
//! the exit-code contract (0 success, 2 invalid input, 3 numeric failure).
//!
//! Every command is a pure function of its input files, flags and seeds, so
//! reruns produce byte-identical output. Commands are callable in-process
//! through [`run`].

pub mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sclego_core::io::config::{parse_run_config, RunConfig};
use sclego_core::io::read_text;
use sclego_core::io::report::OutputFormat;

pub use output::Outputs;

/// Environment variable naming the default `--config` file.
pub const CONFIG_ENV: &str = "SCLEGO_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sclego_core::Error),
    #[error("invalid input: {0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "sclego",
    version,
    about = "Stablecoin risk metrics, scoring and peg simulation"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output directory, created if absent.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated output formats.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "json,csv,md"
    )]
    pub format: Vec<OutputFormat>,
    /// Run configuration (TOML) with scoring parameters.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare collateral assets (volatility, redemption, inflation, compliance).
    Metrics {
        /// Metrics input file listing price series and cost tables.
        inputs: PathBuf,
    },
    /// Score a dataset of assessments and holder snapshots.
    Score {
        /// Dataset directory with assessments.csv and snapshots/.
        dataset: PathBuf,
        /// Multiply every impact weight by this factor.
        #[arg(long)]
        scale: Option<f64>,
    },
    /// Run the peg-dynamics simulator over one or more seeds.
    Simulate {
        /// Scenario file.
        scenario: PathBuf,
        /// Controller set file; no controllers when omitted.
        #[arg(long)]
        controllers: Option<PathBuf>,
        /// File with one seed per line.
        #[arg(long, conflicts_with = "seed")]
        seeds: Option<PathBuf>,
        /// Single seed, overriding the scenario's.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Root-cause histogram of a security-incident file.
    Incidents {
        /// Incident CSV.
        input: PathBuf,
    },
}

impl GlobalOpts {
    pub fn new(out: impl Into<PathBuf>, format: &[OutputFormat]) -> Self {
        Self {
            out: out.into(),
            format: format.to_vec(),
            config: None,
        }
    }

    /// Formats deduplicated in canonical order.
    pub fn formats(&self) -> Vec<OutputFormat> {
        let mut f = self.format.clone();
        f.sort();
        f.dedup();
        f
    }

    pub fn run_config(&self) -> CliResult<RunConfig> {
        match &self.config {
            Some(path) => {
                let text = read_text(path)?;
                Ok(parse_run_config(&text, &path.display().to_string())?)
            }
            None => Ok(RunConfig::default()),
        }
    }
}

/// Executes one command and returns the files it wrote.
pub fn run(cli: &Cli) -> CliResult<Outputs> {
    let g = &cli.global;
    match &cli.command {
        Command::Metrics { inputs } => commands::metrics(g, inputs),
        Command::Score { dataset, scale } => commands::score(g, dataset, *scale),
        Command::Simulate {
            scenario,
            controllers,
            seeds,
            seed,
        } => commands::simulate(g, scenario, controllers.as_deref(), seeds.as_deref(), *seed),
        Command::Incidents { input } => commands::incidents(g, input),
    }
}

/// Runs and maps the outcome to an exit code, reporting errors on stderr
/// and written files on stdout.
pub fn run_to_exit_code(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(outputs) => {
            for p in outputs.paths() {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
