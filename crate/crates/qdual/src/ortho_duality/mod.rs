//! Orthogonality weights and norms, truncated residual checks, the unitary
//! connection matrices between canonical bases and eigenbases of the Jacobi
//! operators, and the biorthogonality of the big q-Laguerre eigenfunctions.
//!
//! Every infinite sum is truncated only after an explicit geometric tail
//! bound falls below a tenth of the requested tolerance; otherwise the check
//! fails with [`QError::TailNotBounded`](crate::QError::TailNotBounded).

mod biortho;
mod connection;
mod finite;
mod relations;
pub(crate) mod tail;

use serde::Serialize;

pub use biortho::{biortho_check, biortho_product};
pub use connection::{connection_entry, kind_branches, unitarity_check};
pub use finite::finite_dual_check;
pub use relations::{
    norm_h, ortho_residual, ortho_residual_detailed, relation_report, weight, OrthoResidual, OrthoSpec, Perturbation,
    RelationId, DEFAULT_TOLERANCE,
};

use crate::families::Params;

/// Outcome of an orthogonality-type check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub check_id: String,
    pub citation: String,
    pub params: Params,
    pub q: f64,
    /// Truncation sizes, meaning depends on the check.
    pub truncation: Vec<usize>,
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
    /// `max(max_offdiag, max_diag_dev)`.
    pub residual: f64,
    pub tail_bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        check_id: String,
        citation: &str,
        params: Params,
        q: f64,
        truncation: Vec<usize>,
        max_offdiag: f64,
        max_diag_dev: f64,
        tail_bound: f64,
        tolerance: f64,
    ) -> Self {
        let residual = max_offdiag.max(max_diag_dev);
        Self {
            check_id,
            citation: citation.to_string(),
            params,
            q,
            truncation,
            max_offdiag,
            max_diag_dev,
            residual,
            tail_bound,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}
