use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants are grouped by how a caller is expected to react: `Usage` and
/// `Contract` are caller mistakes, `Range` means the request is outside the
/// supported integer width, `Numeric` is a tolerance or convergence failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("end of Farey sequence reached")]
    EndOfSequence,

    #[error("tan of a right angle is undefined (x = y); use the radians statistic")]
    RightAngle,

    #[error("statistic `{0}` has a divergent mean over the limiting measure")]
    DivergentMean(String),

    #[error("numeric failure: {message} (achieved bound {achieved:e})")]
    Numeric { message: String, achieved: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, achieved: f64) -> Self {
        Error::Numeric {
            message: msg.into(),
            achieved,
        }
    }
}
