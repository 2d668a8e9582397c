use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The Young function is not superlinear at infinity, so its conjugate is not finite.
    #[error("conjugate not a Young function: {0}")]
    ConjugateNotYoung(String),

    #[error("barrier undefined: {0}")]
    BarrierUndefined(String),

    #[error("renormalize Phi_diamond near 0 required: {0}")]
    RenormalizationRequired(String),

    /// A requested computation lies outside the hypotheses of the result it checks.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Last iterate, indexed like the unknowns of the problem.
        last_iterate: Vec<f64>,
        residual_history: Vec<f64>,
    },

    #[error("comparison vacuous: barrier vanishes identically while the solution does not")]
    ComparisonVacuous,

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
