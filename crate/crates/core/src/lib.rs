//! Calibration of false-alarm rates for max-of-periodogram sinusoid
//! detection on unevenly sampled time series in colored noise.
//!
//! Given only a small training set of noise realizations sampled at the
//! observation instants, the library estimates the false-alarm rate of the
//! standardized-periodogram max test — and detection thresholds for target
//! rates — through an AR-model-aided parametric bootstrap, optionally
//! accelerated by summarizing each replicate's maxima with a generalized
//! extreme-value law. Monte-Carlo oracles and a correlation-blind
//! permutation baseline are included for validation.
//!
//! Modules follow the pipeline:
//!
//! * [`sampling`] — regular/uneven schemes on an underlying grid, ingestion
//! * [`spectral`] — periodograms, standardization, the max statistic
//! * [`armodel`] — AR fitting (Bridge-criterion order selection), PSD,
//!   simulation
//! * [`gev`] — extreme-value cdf/quantile and maximum-likelihood fitting
//! * [`bootstrap`] — the calibration procedures, oracles and baseline
//! * [`io`] — CSV/JSON persistence with provenance echo

pub mod armodel;
pub mod bootstrap;
pub mod error;
pub mod gev;
pub mod io;
mod optim;
pub mod rng;
pub mod sampling;
pub mod spectral;

pub use armodel::{ArModel, FitReport, OrderSelectionConfig, ResidualDiagnostics};
pub use bootstrap::{
    empirical_pfa, fa_distribution, mc_oracle, permutation_baseline, run_b0, threshold_for,
    BootstrapConfig, FaRun, FaSummary, ReplicateRecord, ThresholdSummary, Variant,
};
pub use error::{Error, Result};
pub use gev::{GevFitReport, GevParams};
pub use io::FileMeta;
pub use sampling::{make_uneven, validate_on_grid, SamplingScheme, TimeSeries};
pub use spectral::{
    averaged_periodogram, max_stat, periodogram, standardize, Flavor, FrequencyGrid, MaxStat,
    NudftPlan, Periodogram,
};

/// Crate version, embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
