use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error("modulus is reducible over F_{p}: {reason}")]
    ReducibleModulus { p: u32, reason: String },

    #[error("coordinate {value} out of range for F_{p}")]
    CoordinateOutOfRange { value: i64, p: u32 },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("window too shallow: need exponent {needed}, window stops at {depth}")]
    WindowTooShallow { needed: i64, depth: i64 },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("budget exceeded: {what} needs {needed} steps, cap is {cap}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        cap: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value {value} is not within {tol:e} of an integer")]
    NotIntegral { value: f64, tol: f64 },

    #[error("singular series truncation is not converged (real part {0})")]
    NonConverged(f64),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors that indicate a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
