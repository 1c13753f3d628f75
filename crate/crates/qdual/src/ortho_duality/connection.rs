//! Connection matrices `U` with entries `u_mn = sqrt(w_n / h_m) p_m(x_n)`:
//! row `m` indexes the canonical basis, column `n` the eigenbasis of the
//! Jacobi operator. Two-branch spectra give two blocks.

use std::cell::RefCell;
use std::collections::HashMap;

use super::relations::{ortho_residual_detailed, OrthoSpec, RelationId};
use super::tail::certified_sum;
use super::ResidualReport;
use crate::error::{QError, Result};
use crate::families::Branch;
use crate::jacobi::{OperatorKind, OperatorTag};
use crate::qkernel::{LogMag, QContext};

fn relation_for(tag: OperatorTag) -> RelationId {
    match tag {
        OperatorTag::I1 => RelationId::LittleQJacobi,
        OperatorTag::I2 => RelationId::BigQJacobi,
        OperatorTag::A => RelationId::BigQLaguerre,
        OperatorTag::B1 => RelationId::AltQCharlier,
        OperatorTag::B2 => RelationId::AlSalamCarlitzI,
        OperatorTag::B3 => RelationId::LittleQLaguerre,
    }
}

/// Spectral branches of the operator, one matrix block each.
pub fn kind_branches(kind: &OperatorKind) -> &'static [Branch] {
    relation_for(kind.tag).support()
}

fn spec_for(kind: &OperatorKind) -> Result<OrthoSpec> {
    OrthoSpec::with_context(relation_for(kind.tag), kind.params, QContext::new(kind.q)?)
}

fn entry_ln(spec: &OrthoSpec, m: usize, n: usize, branch: Branch) -> Result<LogMag> {
    let j = n as i64;
    Ok((spec.weight_ln(j, branch)? / spec.norm_ln(m)?).sqrt() * spec.value(m, j, branch)?)
}

/// Entry `u_mn` of the block belonging to `branch`.
pub fn connection_entry(kind: &OperatorKind, m: usize, n: usize, branch: Branch) -> Result<f64> {
    let spec = spec_for(kind)?;
    Ok(entry_ln(&spec, m, n, branch)?.to_f64())
}

/// Memoized entries, since column sums revisit every row.
struct Entries {
    spec: OrthoSpec,
    cache: RefCell<HashMap<(usize, usize, usize), f64>>,
}

impl Entries {
    fn get(&self, block: usize, m: usize, n: usize) -> Result<f64> {
        if let Some(&v) = self.cache.borrow().get(&(block, m, n)) {
            return Ok(v);
        }
        let branch = self.spec.relation.support()[block];
        let v = entry_ln(&self.spec, m, n, branch)?.to_f64();
        self.cache.borrow_mut().insert((block, m, n), v);
        Ok(v)
    }
}

/// Checks the leading `k` columns and rows of the connection matrix.
///
/// Columns: `sum_m u_mn u_mn' = delta` within each block and `0` across
/// blocks. Rows: `sum_blocks sum_n u_mn u_m'n = delta`. Sums over rows stop
/// at `m_trunc`, sums over columns at `m_trunc` per block; both only after
/// the tail is certified below `tol / 10`.
pub fn unitarity_check(kind: &OperatorKind, k: usize, m_trunc: usize, tol: f64) -> Result<ResidualReport> {
    if k == 0 {
        return Err(QError::InvalidInput("block size must be positive".into()));
    }
    let spec = spec_for(kind)?;
    let blocks = spec.relation.support().len();
    let entries = Entries { spec, cache: RefCell::new(HashMap::new()) };
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    let mut tail: f64 = 0.0;
    let mut rows_used = 0;

    for b1 in 0..blocks {
        for b2 in b1..blocks {
            for n in 0..k {
                let start = if b1 == b2 { n } else { 0 };
                for n2 in start..k {
                    let s = certified_sum(
                        |m| Ok(entries.get(b1, m, n)? * entries.get(b2, m, n2)?),
                        k,
                        m_trunc,
                        tol / 10.0,
                    )?;
                    tail = tail.max(s.tail_bound);
                    rows_used = rows_used.max(s.terms);
                    if b1 == b2 && n == n2 {
                        diag = diag.max((s.sum - 1.0).abs());
                    } else {
                        off = off.max(s.sum.abs());
                    }
                }
            }
        }
    }

    for m in 0..k {
        for m2 in m..k {
            let r = ortho_residual_detailed(&entries.spec, m, m2, m_trunc, tol)?;
            tail = tail.max(r.tail_bound);
            if m == m2 {
                diag = diag.max(r.residual);
            } else {
                off = off.max(r.residual);
            }
        }
    }

    Ok(ResidualReport::new(
        format!("unitarity/{}", kind.tag),
        &format!("unitary connection between canonical basis and eigenbasis of {}", kind.tag),
        kind.params,
        kind.q,
        vec![k, rows_used],
        off,
        diag,
        tail,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Params;
    use crate::qkernel::qpoch_inf;

    fn kinds(q: f64) -> Vec<OperatorKind> {
        vec![
            OperatorKind::new(OperatorTag::I1, Params::ab(0.2, 0.1), q).unwrap(),
            OperatorKind::new(OperatorTag::I2, Params::abc(0.2, 0.1, -0.3), q).unwrap(),
            OperatorKind::new(OperatorTag::A, Params::ab(0.5, -0.4), q).unwrap(),
            OperatorKind::new(OperatorTag::B1, Params::a(1.0), q).unwrap(),
            OperatorKind::new(OperatorTag::B2, Params::a(-0.6), q).unwrap(),
            OperatorKind::new(OperatorTag::B3, Params::a(0.5), q).unwrap(),
        ]
    }

    #[test]
    fn leading_blocks_are_unitary() {
        for kind in kinds(0.5) {
            let rep = unitarity_check(&kind, 10, 400, 1e-9).unwrap();
            assert!(rep.pass, "{}: diag {} off {}", kind.tag, rep.max_diag_dev, rep.max_offdiag);
        }
    }

    #[test]
    fn corner_entries() {
        let q = 0.5;
        let ctx = QContext::new(q).unwrap();
        let i1 = OperatorKind::new(OperatorTag::I1, Params::ab(0.2, 0.1), q).unwrap();
        let expected = (qpoch_inf(0.2 * q, &ctx).unwrap() / qpoch_inf(0.02 * q * q, &ctx).unwrap()).sqrt();
        assert!((connection_entry(&i1, 0, 0, Branch::Unit).unwrap() - expected).abs() < 1e-15);

        let a = -0.6;
        let b2 = OperatorKind::new(OperatorTag::B2, Params::a(a), q).unwrap();
        let expected = qpoch_inf(1.0 / a, &ctx).unwrap().powf(-0.5);
        assert!((connection_entry(&b2, 0, 0, Branch::AUnshifted).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn single_column_is_a_unit_vector() {
        let i1 = OperatorKind::new(OperatorTag::I1, Params::ab(0.2, 0.1), 0.5).unwrap();
        let rep = unitarity_check(&i1, 1, 200, 1e-10).unwrap();
        assert!(rep.max_diag_dev <= 1e-10);
    }

    #[test]
    fn two_block_kinds() {
        for kind in kinds(0.3) {
            let blocks = kind_branches(&kind).len();
            let expected = match kind.tag {
                OperatorTag::I2 | OperatorTag::A | OperatorTag::B2 => 2,
                _ => 1,
            };
            assert_eq!(blocks, expected);
        }
    }
}
