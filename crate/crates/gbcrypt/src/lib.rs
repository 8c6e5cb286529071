//! Groebner-basis cryptanalysis of the Ciminion and Hydra PRFs.
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: prime fields up to 128 bits, dense matrices, univariate polynomials.
//! * [`mpoly`]: sparse multivariate polynomials, term orders, division and Buchberger.
//! * [`ciminion`] and [`hydra`]: the ciphers, their iterated polynomial models and
//!   the linear transformations that turn those models into DRL Groebner bases.
//! * [`macaulay`]: (Boolean) Macaulay matrices, solving-degree search, degree of regularity.
//! * [`solver`]: multiplication matrices, the structured eigenvalue solver, FGLM and
//!   the two key-recovery pipelines.
//! * [`estimator`]: closed-form bit-complexity estimates.

pub mod algebra;
pub mod budget;
pub mod ciminion;
pub mod mpoly;
pub mod error;
pub mod estimator;
pub mod hydra;
pub mod macaulay;
pub mod seed;
pub mod solver;

pub use budget::Budget;
pub use error::{Error, Result};
