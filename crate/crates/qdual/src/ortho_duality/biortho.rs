//! Biorthogonality of the big q-Laguerre eigenfunction pairs `Psi_m`, `Phi_n`,
//! `m, n` in Z. Non-negative indices sit on the `a q^(m+1)` branch, negative
//! indices `-k` on the `b q^k` branch.

use super::relations::{OrthoSpec, RelationId};
use super::tail::certified_sum;
use super::ResidualReport;
use crate::error::Result;
use crate::families::{Branch, Params};
use crate::qkernel::LogMag;

fn locate(index: i64) -> (Branch, i64) {
    if index >= 0 {
        (Branch::A, index)
    } else {
        (Branch::B, -index - 1)
    }
}

fn inner_product(spec: &OrthoSpec, m: i64, n: i64, l_trunc: usize, tol: f64) -> Result<(f64, f64)> {
    let (bm, jm) = locate(m);
    let (bn, jn) = locate(n);
    let c = (spec.weight_ln(jm, bm)? * spec.weight_ln(jn, bn)?).sqrt();
    let term = |k: usize| -> Result<f64> {
        let t: LogMag = c * spec.value(k, jm, bm)? * spec.value(k, jn, bn)? / spec.norm_ln(k)?;
        Ok(t.to_f64())
    };
    let s = certified_sum(term, 2, l_trunc, tol / 10.0)?;
    Ok((s.sum, s.tail_bound))
}

/// `<Psi_m, Phi_n>` from the coefficient sequences of both expansions,
/// truncated after at most `l_trunc` terms.
pub fn biortho_product(a: f64, b: f64, q: f64, m: i64, n: i64, l_trunc: usize) -> Result<f64> {
    let spec = OrthoSpec::new(RelationId::BigQLaguerre, Params::ab(a, b), q)?;
    Ok(inner_product(&spec, m, n, l_trunc, super::DEFAULT_TOLERANCE)?.0)
}

/// Checks `<Psi_m, Phi_n> = delta_mn` for `m, n` in `-k..=k`.
pub fn biortho_check(a: f64, b: f64, q: f64, k: usize, l_trunc: usize, tol: f64) -> Result<ResidualReport> {
    let spec = OrthoSpec::new(RelationId::BigQLaguerre, Params::ab(a, b), q)?;
    let k = k as i64;
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for m in -k..=k {
        for n in m..=k {
            let (s, t) = inner_product(&spec, m, n, l_trunc, tol)?;
            tail = tail.max(t);
            if m == n {
                diag = diag.max((s - 1.0).abs());
            } else {
                off = off.max(s.abs());
            }
        }
    }
    Ok(ResidualReport::new(
        "biorthogonality/big-q-laguerre".into(),
        "biorthogonality of big q-Laguerre eigenfunctions Psi_m, Phi_n",
        spec.params,
        q,
        vec![2 * k as usize + 1, l_trunc],
        off,
        diag,
        tail,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (a, b, q) = (0.5, -0.4, 0.5);
        assert!((biortho_product(a, b, q, 0, 0, 400).unwrap() - 1.0).abs() <= 1e-9);
        assert!(biortho_product(a, b, q, 1, -1, 400).unwrap().abs() <= 1e-9);
        assert!((biortho_product(a, b, q, 2, 2, 400).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn full_check() {
        let rep = biortho_check(0.4, -0.3, 0.3, 4, 400, 1e-9).unwrap();
        assert!(rep.pass, "{}", rep.residual);
    }
}
