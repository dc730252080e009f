//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors produced by construction, parsing and verification routines.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Error {
    /// Two objects built over different dimensions were combined.
    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Dimension outside the supported range 1..=64.
    #[error("invalid dimension n = {0}; supported range is 1..=64")]
    InvalidDimension(usize),

    /// Coordinate index outside 1..=n.
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// A monomial of degree 0 or degree > 3 where a cubic form was required.
    #[error("monomial degree {0} not in 1..=3")]
    BadDegree(usize),

    /// A twisting-function monomial missing a factor from one argument.
    #[error("twist monomial must use both arguments: |I| = {0}, |J| = {1}")]
    BadTwistMonomial(usize, usize),

    /// Construction requested for a dimension of the wrong residue class.
    #[error("dimension n = {n} has n mod 4 = {got}; construction needs {want}")]
    WrongResidue {
        n: usize,
        got: usize,
        want: &'static str,
    },

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A matrix that fails the Hadamard condition or its order constraints.
    #[error("invalid Hadamard data: {0}")]
    Hadamard(String),

    /// An exact integer computation left the 64-bit coefficient range.
    #[error("integer coefficient overflow during {0}")]
    CoeffOverflow(&'static str),

    /// A search or expansion exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A truth table or enumeration too large to materialize.
    #[error("table for n = {0} too large; cap is n <= {1}")]
    TableTooLarge(usize, usize),

    /// An operation needs a nonempty set.
    #[error("empty set where a nonempty one is required")]
    EmptySet,
}

pub type Result<T> = std::result::Result<T, Error>;
