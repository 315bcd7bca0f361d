use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("invalid {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("unknown tuning `{given}` (valid: equal, pythagorean, kirnberger3, rational, just)")]
    UnknownTuning { given: String },

    #[error("{0} tuning has irrational frequency ratios; periodicity needs fractions")]
    IrrationalTuning(String),

    #[error("invalid harmony: {0}")]
    InvalidHarmony(String),

    #[error("{measure} is undefined for {reason}")]
    UndefinedMeasure {
        measure: &'static str,
        reason: String,
    },

    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("measure `{measure}` is not available for dataset `{dataset}`")]
    MeasureUnavailable { measure: String, dataset: String },

    #[error("parse error at position {position} (`{token}`): {reason}")]
    Parse {
        token: String,
        position: usize,
        reason: String,
    },

    #[error("dataset error: {0}")]
    Dataset(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// Whether the error stems from bad caller input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            Error::Overflow(_) | Error::NoConvergence(_) | Error::Dataset(_)
        )
    }
}
