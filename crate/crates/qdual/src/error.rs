//! Error type shared by every module of the crate.
//!
//! All fallible operations return [`crate::Result`]. Failures are separated
//! into mathematical obstructions (a denominator that does not expand in the
//! chosen cone, a parameter that is not generic, ...) and contract violations
//! (a vector that is not in the semigroup, a column set that is not a basis).

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A denominator factor `1 - q^lambda` was asked to expand in a cone on
    /// which `lambda` does not pair positively.
    #[error("denominator exponent {exponent:?} has non-positive pairing {pairing} with the chosen covector")]
    NonPositiveDenominator { exponent: Vec<i64>, pairing: String },

    /// An exact division had a non-zero remainder.
    #[error("exact division failed: {0}")]
    NotDivisible(String),

    /// A set of row indices was required to index an invertible square
    /// submatrix and did not.
    #[error("the rows {0:?} do not form a basis")]
    NotABasis(Vec<usize>),

    /// A lattice vector was required to lie in the positive semigroup spanned
    /// by the positive cocircuits and does not.
    #[error("the weight {0:?} is not in the positive semigroup")]
    NotInSemigroup(Vec<i64>),

    /// The input data does not satisfy the arrangement axioms.
    #[error("invalid arrangement: {0}")]
    ArrangementMismatch(String),

    /// A denominator power too small for the requested Ore move.
    #[error("denominator power {power} is too small for a polynomial of degree {degree}")]
    InsufficientPower { power: u32, degree: u32 },

    /// A quantization or character parameter failed a genericity test.
    #[error("non-generic parameter: {0}")]
    NonGenericParameter(String),

    /// An affine fit over sampled parameters broke down.
    #[error("affine fit failed: {0}")]
    FitFailure(String),

    /// A circuit handed to the coordinate-ring side was not positive.
    #[error("the circuit {0:?} is not a positive circuit")]
    NotPositiveCircuit(Vec<i64>),

    /// A weight that must be dominant is not.
    #[error("the weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    /// A polynomial that must be Weyl invariant is not.
    #[error("not Weyl invariant: {0}")]
    NotInvariant(String),

    /// An element that must have weight zero does not.
    #[error("the element has non-zero weight {0:?}")]
    NonZeroWeight(Vec<i64>),

    /// A linear solve that must succeed (by a rank argument) did not.
    #[error("linear division failed: {0}")]
    DivisionFailure(String),

    /// Two cone-supported series with incompatible offsets were combined.
    #[error("series offsets differ by a non-integral vector: {0}")]
    OffsetMismatch(String),

    /// Malformed user input (CLI and file parsing).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
