//! Command-line driver for the calibration pipeline.
//!
//! Every run is configured by a flat TOML file (`--config`), with a few
//! flags overriding file keys. All outputs embed the effective
//! configuration and master seed; rerunning any command with the same
//! config and seed reproduces every output byte, at any `--threads` value.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure
//! (model or extreme-value fitting), 4 I/O error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn from_ref(e: &pfacal::Error) -> Self {
        use pfacal::Error::*;
        match e {
            Io { .. } | Parse { .. } => CliError::Io(e.to_string()),
            InvalidArgument(_) | NotOnGrid { .. } | NonMonotoneTimes { .. }
            | MixedSchemes { .. } => CliError::Config(e.to_string()),
            // Provenance wrappers classify by their innermost cause, but a
            // mid-run precondition failure is a numerical problem, not a
            // config one.
            Replicate { source, .. } | InnerDraw { source, .. } => {
                match CliError::from_ref(source) {
                    CliError::Io(m) => CliError::Io(m),
                    _ => CliError::Numerical(e.to_string()),
                }
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<pfacal::Error> for CliError {
    fn from(e: pfacal::Error) -> Self {
        CliError::from_ref(&e)
    }
}

#[derive(Parser)]
#[command(
    name = "pfacal",
    version,
    about = "False-alarm calibration for max-of-periodogram detection on uneven sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (flat TOML key/value file).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed, overriding the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: available parallelism). Outputs are
    /// identical at any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory, overriding the config file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Bootstrap variant, overriding the config file.
    #[arg(long, global = true, value_parser = ["b0", "bstar"])]
    variant: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic training and observation series from the
    /// configured model, with an optional injected sinusoid.
    Simulate,
    /// Calibrate false-alarm rates and thresholds on a training set.
    Calibrate {
        /// Training series files (`t,x` CSV); falls back to `train_files`.
        train: Vec<PathBuf>,
    },
    /// Ground-truth FA curve of the configured model by brute force.
    Oracle,
    /// Permutation-resampling FA curve for one observation.
    Baseline {
        /// Observation series file (`t,x` CSV).
        observation: PathBuf,
    },
    /// Max test of an observation against a saved calibration.
    Test {
        /// Observation series file (`t,x` CSV).
        observation: PathBuf,
        /// Calibration manifest (`calibrate` output JSON).
        calibration: PathBuf,
        /// Training series files for the test statistic's denominator.
        #[arg(long)]
        train: Vec<PathBuf>,
    },
    /// Dispersion-vs-compute table over inner sample counts, both variants.
    Sweep {
        /// Training series files (`t,x` CSV); falls back to `train_files`.
        train: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Thread count only affects speed; results are seed-determined.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let mut config = ExperimentConfig::load(config_path)?;
    config.apply_overrides(cli.seed, cli.variant.as_deref(), cli.out.as_deref());
    let ctx = commands::Context::new(config)?;
    match cli.command {
        Command::Simulate => commands::simulate::run(&ctx),
        Command::Calibrate { train } => commands::calibrate::run(&ctx, &train),
        Command::Oracle => commands::oracle::run(&ctx),
        Command::Baseline { observation } => commands::baseline::run(&ctx, &observation),
        Command::Test {
            observation,
            calibration,
            train,
        } => commands::test::run(&ctx, &observation, &calibration, &train),
        Command::Sweep { train } => commands::sweep::run(&ctx, &train),
    }
}
