use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix entries must be finite (found {value} at ({row}, {col}))")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("matrix data has {got} entries, expected {rows}x{cols} = {}", rows * cols)]
    BadLength { rows: usize, cols: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("The matrix is not of index 1 (index {index})")]
    NotIndexOne { index: usize },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("not a proper splitting: range gap {range_gap:.3e}, null-space gap {null_gap:.3e}")]
    NotProper { range_gap: f64, null_gap: f64 },

    #[error("no admissible splitting found after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("cross-check failed: residual {residual:.3e} exceeds {bound:.3e}")]
    CrossCheckFailed { residual: f64, bound: f64 },

    #[error("scheme diverges: spectral radius {rho:.6} >= 1")]
    DivergentScheme { rho: f64 },

    #[error("group inverse has mixed signs; no scalar preconditioner applies")]
    UnsupportedSign,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of a mathematical precondition (as opposed to
    /// numerical breakdown or bad input).
    pub fn is_precondition_failure(&self) -> bool {
        matches!(
            self,
            Error::NotIndexOne { .. }
                | Error::NotProper { .. }
                | Error::AttemptsExhausted { .. }
                | Error::HypothesisViolation(_)
                | Error::DivergentScheme { .. }
                | Error::UnsupportedSign
        )
    }

    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::Singular | Error::NumericFailure(_) | Error::CrossCheckFailed { .. }
        )
    }
}
