//! Error types shared across the engine.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the pricing engine and its special-function layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An input violated a documented precondition. The message names the field.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Gamma-function pole hit (argument at a non-positive integer).
    #[error("gamma pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    /// The result underflows to zero in double precision; flagged rather than
    /// silently returned.
    #[error("{0} underflows double precision")]
    UnderflowToZero(&'static str),

    /// Result magnitude exceeds double precision range.
    #[error("{0} overflows double precision")]
    Overflow(&'static str),

    /// Neither evaluation regime reached the requested tolerance.
    #[error("{what} did not converge (best relative error estimate {best:.2e})")]
    NonConvergence { what: &'static str, best: f64 },

    /// Spectral truncation at u_max leaves a tail above tolerance.
    #[error("truncation tail estimate {estimate:.3e} exceeds tolerance {tolerance:.3e} at u_max")]
    TailBound { estimate: f64, tolerance: f64 },

    /// An integration grid cannot resolve the integrand oscillation.
    #[error("grid too coarse: node spacing {spacing:.3e} exceeds required {required:.3e}")]
    GridTooCoarse { spacing: f64, required: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
