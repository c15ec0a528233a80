//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors raised by the solvers and the potential evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Leading coefficient is below the degeneracy threshold relative to the
    /// other coefficients; the caller asked for a higher degree than the
    /// polynomial actually has.
    #[error("degenerate leading coefficient: |{lead:e}| below threshold for degree {degree}")]
    DegenerateLeadingCoefficient { lead: f64, degree: usize },

    /// Polynomial degree outside what the radical solvers support.
    #[error("unsupported polynomial degree {0} (only 1..=4 solvable by radicals here)")]
    UnsupportedDegree(usize),

    /// Invalid argument value for the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested at (or numerically on top of) a fixed particle.
    #[error("singular evaluation at ({x}, {y}): coincides with a fixed particle")]
    Singularity { x: f64, y: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
