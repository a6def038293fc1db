//! Error type shared by every module of the crate.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building functions, applying
/// operators, or running certificates. Parse errors carry a byte
/// position; evaluation errors raised inside a DSL expression are
/// wrapped in [`Error::EvalAt`] with the span of the offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    UnknownBuiltin(String),
    InvalidParams(String),
    OutOfRange(String),
    /// Convolution inverse requested for a function whose value at 1 is
    /// not an invertible coefficient (a nonzero rational).
    NotInvertible(String),
    ZeroToThePowerZero,
    NotInA0(String),
    NotInA1(String),
    UnsupportedDepth(i64),
    HorizonExhausted(String),
    DivisionByZeroValue(String),
    NotSquare { rows: usize, cols: usize },
    DimensionTooLarge(usize),
    NonDistinctPrimes(String),
    HypothesisViolated(String),
    /// Index of a function that is zero up to its horizon, so its order
    /// is unknown.
    ZeroFunction(usize),
    CapExceeded { count: usize, cap: usize },
    InvalidQ,
    Syntax { position: usize, expected: String, found: String },
    EvalAt { span: (usize, usize), source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownBuiltin(name) => write!(f, "unknown builtin `{name}`"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::NotInvertible(msg) => write!(f, "not invertible: {msg}"),
            Error::ZeroToThePowerZero => {
                write!(f, "0^0: convolution power 0 of a function that is zero up to its horizon")
            }
            Error::NotInA0(msg) => write!(f, "not in A0 (value at 1 must be 0): {msg}"),
            Error::NotInA1(msg) => write!(f, "not in A1 (value at 1 must be 1): {msg}"),
            Error::UnsupportedDepth(m) => write!(
                f,
                "Exp iteration depth {m} is not exactly representable; only -1, 0 and 1 are"
            ),
            Error::HorizonExhausted(msg) => write!(f, "horizon exhausted: {msg}"),
            Error::DivisionByZeroValue(msg) => write!(f, "division by zero value: {msg}"),
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix is not square ({rows}x{cols})")
            }
            Error::DimensionTooLarge(n) => {
                write!(f, "determinant dimension {n} exceeds the supported maximum of 6")
            }
            Error::NonDistinctPrimes(msg) => write!(f, "primes must be distinct: {msg}"),
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::ZeroFunction(i) => write!(
                f,
                "function #{i} is zero up to its horizon; its order is unknown"
            ),
            Error::CapExceeded { count, cap } => {
                write!(f, "monomial count {count} exceeds cap {cap}")
            }
            Error::InvalidQ => write!(f, "recurrence coefficient Q must be nonzero"),
            Error::Syntax { position, expected, found } => {
                write!(f, "syntax error at byte {position}: expected {expected}, found {found}")
            }
            Error::EvalAt { span, source } => {
                write!(f, "evaluation error at bytes {}..{}: {source}", span.0, span.1)
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::EvalAt { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
