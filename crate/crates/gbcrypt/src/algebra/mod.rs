//! Exact arithmetic foundation: prime fields, dense matrices and univariate
//! polynomials.

pub mod field;
pub mod matrix;
pub mod unipoly;

pub use field::{FieldElement, PrimeField};
pub use matrix::{DenseMatrix, Rref};
pub use unipoly::{field_equation_gcd, scan_roots, uni_roots, UniPoly};

use crate::error::Result;

/// Multiplicative inverse of `a` in `field`.
pub fn field_inv(field: &PrimeField, a: FieldElement) -> Result<FieldElement> {
    field.inv(a)
}
