use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by constructors, engines and file parsers.
///
/// Validation errors name the violated invariant together with the
/// measured residual so callers can report how far off an input was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("numeric failure: {what} (residual {residual:e})")]
    NumericFailure { what: &'static str, residual: f64 },

    #[error("operator is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPsd { eigenvalue: f64 },

    #[error("matrix is not an isometry: |V*V - I|_max = {residual:e}")]
    NotIsometric { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invariant `{invariant}` violated (residual {residual:e})")]
    Invariant { invariant: &'static str, residual: f64 },

    #[error("operators do not commute: residual {residual:e} at {witness:?}")]
    NonCommuting {
        residual: f64,
        witness: (usize, usize, usize, usize),
    },

    #[error("state vector is not normalised: |norm - 1| = {defect:e}")]
    NonUnitState { defect: f64 },

    #[error("problem too large: {what} = {size} exceeds cap {cap}")]
    TooLarge { what: &'static str, size: f64, cap: f64 },

    #[error("linear program is infeasible (phase-one residual {residual:e})")]
    Infeasible { residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot read input: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
