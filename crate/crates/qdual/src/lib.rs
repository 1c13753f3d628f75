//! Numerical toolkit for q-orthogonal polynomials and their duals.
//!
//! Modules, bottom up:
//! - [`qkernel`]: q-Pochhammer symbols, infinite products, `rφs` series.
//! - [`families`]: seventeen polynomial families with series, recurrence,
//!   lattice, q-difference and duality evaluators.
//! - [`jacobi`]: the six symmetric Jacobi operators and their spectra.
//! - [`ortho_duality`]: orthogonality weights and norms, truncated residuals,
//!   unitary connection matrices and biorthogonality.
//! - [`identities`]: registry of summation, transformation and generating
//!   function identities evaluated as residuals.

pub mod error;
pub mod families;
pub mod identities;
pub mod jacobi;
pub mod ortho_duality;
pub mod qkernel;

pub use error::{QError, Result};
