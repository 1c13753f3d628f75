use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Params;
use crate::error::{QError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    /// Geometric points `q^m`, `a q^{m+1}`, `c q^{m+1}`, ... selected by branch.
    PowerQ,
    /// `q^{-m}`.
    InversePowerQ,
    /// `q^{-m} + ab q^{m+1}`.
    MuAB,
    /// `q^{-m} - a q^m`.
    MuAlt,
    /// `q^{-m} ± a q^{m+1}`, sign chosen by branch.
    MuSigned,
    /// `(d^{-1} q^{-m} - d q^m) / 2`, `m` any integer.
    MuBilateral,
}

/// Support branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `q^m` (or the single branch of a non-geometric lattice).
    Unit,
    /// `a q^{m+1}`.
    A,
    /// `b q^{m+1}`.
    B,
    /// `c q^{m+1}`.
    C,
    /// `a q^m`.
    AUnshifted,
    /// `+sqrt(a) q^{m+1}`.
    SqrtAPlus,
    /// `-sqrt(a) q^{m+1}`.
    SqrtAMinus,
    /// `+a` in the signed quadratic lattice.
    Plus,
    /// `-a` in the signed quadratic lattice.
    Minus,
}

impl Branch {
    pub fn slug(self) -> &'static str {
        match self {
            Branch::Unit => "unit",
            Branch::A => "a",
            Branch::B => "b",
            Branch::C => "c",
            Branch::AUnshifted => "a-unshifted",
            Branch::SqrtAPlus => "sqrt-a-plus",
            Branch::SqrtAMinus => "sqrt-a-minus",
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Branch {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        use Branch::*;
        [Unit, A, B, C, AUnshifted, SqrtAPlus, SqrtAMinus, Plus, Minus]
            .into_iter()
            .find(|b| b.slug() == s)
            .ok_or_else(|| QError::InvalidBranch(s.to_string()))
    }
}

fn qpow(q: f64, m: i64) -> f64 {
    q.powi(m as i32)
}

/// Support point with index `m` on the given branch.
pub fn lattice(kind: LatticeKind, p: &Params, m: i64, branch: Branch, q: f64) -> Result<f64> {
    if m < 0 && kind != LatticeKind::MuBilateral {
        return Err(QError::InvalidInput(format!("lattice index must be nonnegative, got {m}")));
    }
    let bad = || Err(QError::InvalidBranch(format!("{branch} is not a branch of {kind:?}")));
    match kind {
        LatticeKind::PowerQ => match branch {
            Branch::Unit => Ok(qpow(q, m)),
            Branch::A => Ok(p.a * qpow(q, m + 1)),
            Branch::B => Ok(p.b * qpow(q, m + 1)),
            Branch::C => Ok(p.c * qpow(q, m + 1)),
            Branch::AUnshifted => Ok(p.a * qpow(q, m)),
            Branch::SqrtAPlus => Ok(p.a.sqrt() * qpow(q, m + 1)),
            Branch::SqrtAMinus => Ok(-p.a.sqrt() * qpow(q, m + 1)),
            _ => bad(),
        },
        LatticeKind::InversePowerQ => match branch {
            Branch::Unit => Ok(qpow(q, -m)),
            _ => bad(),
        },
        LatticeKind::MuAB => match branch {
            Branch::Unit => Ok(qpow(q, -m) + p.a * p.b * qpow(q, m + 1)),
            _ => bad(),
        },
        LatticeKind::MuAlt => match branch {
            Branch::Unit => Ok(qpow(q, -m) - p.a * qpow(q, m)),
            _ => bad(),
        },
        LatticeKind::MuSigned => match branch {
            Branch::Plus => Ok(qpow(q, -m) + p.a * qpow(q, m + 1)),
            Branch::Minus => Ok(qpow(q, -m) - p.a * qpow(q, m + 1)),
            _ => bad(),
        },
        LatticeKind::MuBilateral => match branch {
            Branch::Unit => Ok((qpow(q, -m) / p.d - p.d * qpow(q, m)) / 2.0),
            _ => bad(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        let v = lattice(LatticeKind::MuAB, &Params::ab(0.2, 0.1), 0, Branch::Unit, 0.5).unwrap();
        assert!((v - 1.01).abs() < 1e-15);
        let v = lattice(LatticeKind::MuAlt, &Params::a(1.0), 1, Branch::Unit, 0.5).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
        let v = lattice(LatticeKind::PowerQ, &Params::abc(0.2, 0.1, -0.3), 0, Branch::C, 0.5).unwrap();
        assert!((v + 0.15).abs() < 1e-15);
    }

    #[test]
    fn branch_mismatch_is_rejected() {
        let e = lattice(LatticeKind::MuAB, &Params::ab(0.2, 0.1), 0, Branch::C, 0.5);
        assert!(matches!(e, Err(QError::InvalidBranch(_))));
        assert!(lattice(LatticeKind::MuBilateral, &Params::bilateral(1.0, 1.0, 0.7), -3, Branch::Unit, 0.5).is_ok());
    }
}
