use thiserror::Error;

use crate::poly::NCPoly;
use crate::Rational;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation caps differ ({0} vs {1})")]
    CapMismatch(u32, u32),

    /// The target of a decomposition is not in the span of the generators.
    /// Carries what is left after reducing against the span.
    #[error("target is not in the span of the derivation generators; residual {residual}")]
    NotInSpan { residual: NCPoly },

    /// `y` with `y·A = 0` and `y·b != 0`.
    #[error("linear system has no solution")]
    NoSolution { certificate: Vec<Rational> },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
