use thiserror::Error;

use crate::gev::GevFitReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by calibration primitives.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample {index} at t={time} is not on the delta_t={delta_t} grid")]
    NotOnGrid { index: usize, time: f64, delta_t: f64 },

    #[error("times must be strictly increasing (violated at sample {index})")]
    NonMonotoneTimes { index: usize },

    #[error("series {index} is not sampled on the shared scheme")]
    MixedSchemes { index: usize },

    #[error("degenerate denominator: averaged periodogram is zero at frequency index {index}")]
    DegenerateDenominator { index: usize },

    #[error("no observation pairs at lag {lag}: sampling too sparse for the requested model order")]
    InsufficientLagCoverage { lag: usize },

    #[error("autocovariance sequence is not positive definite (breakdown at order {order})")]
    NotPositiveDefinite { order: usize },

    #[error("autoregressive model is not stationary")]
    NonStationary,

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error(
        "extreme-value fit did not converge after {} evaluations (log-likelihood {:.6})",
        report.evaluations,
        report.log_likelihood
    )]
    GevNonConvergence { report: GevFitReport },

    #[error("{failed} of {total} replicates had invalid extreme-value fits (budget is 5%)")]
    TooManyInvalidReplicates { failed: usize, total: usize },

    #[error("zero sample variance: cannot normalize the observed series")]
    DegenerateVariance,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path} (record {record}): {message}")]
    Parse {
        path: std::path::PathBuf,
        record: usize,
        message: String,
    },

    #[error("replicate {replicate}: {source}")]
    Replicate {
        replicate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("replicate {replicate}, draw {draw}: {source}")]
    InnerDraw {
        replicate: usize,
        draw: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_replicate(self, replicate: usize) -> Error {
        Error::Replicate {
            replicate,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_draw(self, replicate: usize, draw: usize) -> Error {
        Error::InnerDraw {
            replicate,
            draw,
            source: Box::new(self),
        }
    }
}
