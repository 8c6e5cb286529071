//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime in [3, 2^128)")]
    InvalidModulus(u128),
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operands live in different rings or have mismatched lengths")]
    RingMismatch,
    #[error("resource budget exceeded")]
    BudgetExceeded,
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("substitution chain broken: no shape-position basis by back substitution")]
    ShapeUnavailable,
    #[error("operation only supports the standard Ciminion variant")]
    VariantUnsupported,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("affine members have rank {0}, below the required rank")]
    AffineRankDeficit(usize),
    #[error("no independent subset of head linear forms of full size")]
    ChangeOfCoordinatesFailed,
    #[error("boolean basis is not K-Boolean under the given order")]
    NotBoolean,
    #[error("no Groebner basis found up to degree {0}")]
    NotFoundWithin(u32),
    #[error("system is not in the special shape required by the eigenvalue solver: {0}")]
    ShapeViolation(String),
    #[error("no candidate survived verification")]
    NoSolution,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
