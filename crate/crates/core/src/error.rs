use alloc::string::String;
use core::fmt;

/// Errors raised by validation and numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Slot sequences of different lengths, or an empty graph.
    Shape(String),
    /// A same-letter (+,−) pair whose weight product is not below 1.
    Convergence { i: i64, j: i64, product: f64 },
    /// A partition that is too long for the requested evaluation.
    TooLong { len: usize, bound: usize },
    /// The product formula does not apply to this slot pattern.
    SlotCondition(String),
    /// A covering that is not a valid perfect matching.
    InvalidCovering(String),
    /// Evaluation at (or numerically on top of) a pole.
    Singular(String),
    /// Iterative solver or root tracker gave up.
    NoConvergence(String),
    /// Requested index is outside the valid range.
    OutOfRange(String),
    /// Anything else that makes the input unusable.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::Convergence { i, j, product } => write!(
                f,
                "weights of slots {i} and {j} violate the convergence bound: x_i*x_j = {product} >= 1"
            ),
            Error::TooLong { len, bound } => {
                write!(f, "partition of length {len} exceeds bound {bound}")
            }
            Error::SlotCondition(s) => write!(f, "slot condition violated: {s}"),
            Error::InvalidCovering(s) => write!(f, "invalid covering: {s}"),
            Error::Singular(s) => write!(f, "singular evaluation: {s}"),
            Error::NoConvergence(s) => write!(f, "no convergence: {s}"),
            Error::OutOfRange(s) => write!(f, "out of range: {s}"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
