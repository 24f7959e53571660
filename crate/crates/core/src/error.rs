use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible operands: {0}")]
    Incompatible(&'static str),
    #[error("value {value} is not a multiple of the grid step {step}")]
    Alignment { value: f64, step: f64 },
    #[error("support does not fit the truncation: need radius {required}, have {available}")]
    Truncation { required: usize, available: usize },
    #[error("expected a real field, found imaginary part {max_imag:e}")]
    RealExpected { max_imag: f64 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("fiber {fiber}: matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { fiber: usize, deviation: f64 },
    #[error("not a frame: lower bound {lower:e} does not exceed tolerance {tol:e}")]
    NotAFrame { lower: f64, tol: f64 },
    #[error("fiber {fiber}: Hermitian eigensolver did not converge")]
    NoConvergence { fiber: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

impl Error {
    /// Errors produced by a numerical computation rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::NotAFrame { .. })
    }

    /// Attach a fiber index to errors coming out of a per-fiber computation.
    pub(crate) fn at_fiber(self, fiber: usize) -> Self {
        match self {
            Error::NoConvergence { .. } => Error::NoConvergence { fiber },
            Error::NotHermitian { deviation, .. } => Error::NotHermitian { fiber, deviation },
            other => other,
        }
    }
}
