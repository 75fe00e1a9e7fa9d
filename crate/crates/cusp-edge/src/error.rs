use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two operands live over algebras or spaces of different dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Requested size exceeds the desk-scale resource cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A hypothesis that makes an integral or composition finite fails.
    #[error("divergent: {0}")]
    Divergent(String),

    /// A configuration the implementation deliberately refuses.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Iteration or quadrature failed to meet its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The Bessel order candidate does not annihilate the heat residual.
    #[error("convention mismatch: best-fit nu = {best_nu}, residual = {residual:e}")]
    ConventionMismatch { best_nu: f64, residual: f64 },

    /// Least-squares fit against declared expansion orders left a large residual.
    #[error("expansion mismatch: fit residual {residual:e} above tolerance {tolerance:e}")]
    ExpansionMismatch { residual: f64, tolerance: f64 },

    /// Failure to parse a text description.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
