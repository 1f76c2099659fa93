use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("task-severity chain is not irreducible (state {0} cannot reach every other state)")]
    NotErgodic(usize),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("interval [{t0}, {t1}] lies outside the path coverage [{start}, {end}]")]
    OutsideCoverage { t0: f64, t1: f64, start: f64, end: f64 },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("empty history")]
    EmptyHistory,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability vector: {0}")]
    InvalidProportions(String),

    #[error("invalid inspection log: {0}")]
    InvalidLog(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("covariance is not positive semi-definite: {0}")]
    NotPositiveDefinite(String),

    #[error("effective degradation rate {0} is not positive; the closed-form lifetime is undefined")]
    DegenerateDrift(f64),

    #[error("accuracy {accuracy} already at or beyond the failure threshold {threshold}")]
    AlreadyFailed { accuracy: f64, threshold: f64 },

    #[error("median not identified: only {failed} of {total} paths failed before the horizon")]
    HorizonTooShort { failed: usize, total: usize },

    #[error(
        "excessive censoring: failure fraction {failure_fraction:.4} at horizon {horizon_multiplier}x E[T1]"
    )]
    ExcessiveCensoring { failure_fraction: f64, horizon_multiplier: f64 },

    #[error("update fraction {fraction} of L_f precedes the first inspection")]
    BeforeFirstEpoch { fraction: f64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the caller's inputs rather than by the
    /// environment or a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Singular(_))
    }
}
