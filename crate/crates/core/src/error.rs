use alloc::string::String;
use core::fmt;

/// Everything that can go wrong inside the core library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Operand shapes do not line up.
    ShapeMismatch(String),
    /// An operation that needs at least one element received none.
    Empty(&'static str),
    /// The input polynomial specification is malformed.
    InvalidSpec(String),
    /// The Newton polytope is not full-dimensional.
    Degenerate { ambient: usize, found: usize },
    /// Input exceeds the documented desk-scale limits of an algorithm.
    TooLarge(String),
    /// A computation would exceed its enumeration budget.
    BudgetExceeded { what: &'static str, size: u128, cap: u128 },
    /// The supplied modulus is not prime.
    NotPrime(u64),
    /// A criterion that only applies to a restricted class of inputs was asked about something else.
    Unsupported(String),
    /// Two routes that must agree did not, or a derived quantity violated an invariant.
    Inconsistent(String),
    /// A value that must be integral was not.
    NonIntegral(String),
    /// The numeric root finder did not converge.
    RootFinding { degree: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => {
                write!(f, "expected a square matrix, got {rows}x{cols}")
            }
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Empty(what) => write!(f, "empty input: {what}"),
            Error::InvalidSpec(msg) => write!(f, "invalid polynomial spec: {msg}"),
            Error::Degenerate { ambient, found } => write!(
                f,
                "Newton polytope is not full-dimensional: affine dimension {found} in R^{ambient}"
            ),
            Error::TooLarge(msg) => write!(f, "input too large: {msg}"),
            Error::BudgetExceeded { what, size, cap } => write!(
                f,
                "{what}: work size {size} exceeds budget {cap}; use the fast path or a smaller extension degree"
            ),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::Inconsistent(msg) => write!(f, "internal consistency failure: {msg}"),
            Error::NonIntegral(msg) => write!(f, "non-integral value: {msg}"),
            Error::RootFinding { degree } => {
                write!(f, "root finder failed to converge on a degree-{degree} polynomial")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
