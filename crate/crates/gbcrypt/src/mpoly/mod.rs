//! Sparse multivariate polynomials over F_q with DRL/LEX term orders,
//! multivariate division, a Buchberger oracle, staircase extraction and a
//! small-instance generic-coordinates checker.

pub mod groebner;
pub mod monomial;
pub mod poly;

pub use groebner::{
    buchberger, is_generic_coordinates_small, is_groebner, quotient_basis, reduce, reduce_basis, s_polynomial,
    staircase, top_component, Reducer,
};
pub use monomial::{compare_monomials, Monomial, OrderKind, TermOrder};
pub use poly::{linear_rref, MPoly, PolySystem, Ring, Role};
