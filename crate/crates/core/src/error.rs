use thiserror::Error;

use crate::limits::ConvergenceReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the carrier's domain (antipodal sphere points, tangent
    /// vectors past the cut locus, malformed payloads).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid scalar {0}: scalars must be finite, positive and have a finite reciprocal")]
    InvalidScalar(f64),

    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("points belong to different carriers ({left} vs {right})")]
    CarrierMismatch { left: String, right: String },

    #[error("numeric range exceeded: {0}")]
    NumericRange(String),

    #[error("conical group axiom `{axiom}` violated (residual {residual:e})")]
    ConicalAxiom { axiom: &'static str, residual: f64 },

    #[error("limit did not converge: {context}")]
    NonConvergent {
        context: String,
        report: Box<ConvergenceReport>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors a sampling campaign should skip-and-count rather than
    /// abort on.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}
