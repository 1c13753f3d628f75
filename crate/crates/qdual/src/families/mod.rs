//! The seventeen polynomial families: registry, series and recurrence
//! evaluators, support lattices, q-difference equations, closed-form special
//! values and pointwise duality between primal and dual families.

mod params;

pub mod duality;
pub mod lattice;
pub mod qdiff;
pub mod recurrence;
pub mod series;
pub mod special;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use duality::{eval_pair, DualPair, LatticeValue};
pub use lattice::{lattice, Branch, LatticeKind};
pub use params::{validate_params, Params, BOUNDARY_MARGIN};
pub use qdiff::qdiff_residual;
pub use recurrence::{eval_rec, rec_coeffs, RecCoeffs};
pub use series::{eval_series, eval_series_at, eval_series_detailed, Point};
pub use special::{special_points, special_value, SpecialPoint};

use crate::error::{QError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    LittleQJacobi,
    DualLittleQJacobi,
    BigQJacobi,
    DualBigQJacobi,
    DiscreteQUltra,
    DiscreteQUltraTilde,
    DualDiscreteQUltra,
    DualDiscreteQUltraTilde,
    BigQLaguerre,
    QMeixner,
    AltQCharlier,
    DualAltQCharlier,
    AlSalamCarlitzI,
    AlSalamCarlitzII,
    QCharlier,
    LittleQLaguerre,
    BilateralASC,
}

impl FamilyId {
    pub const ALL: [FamilyId; 17] = [
        FamilyId::LittleQJacobi,
        FamilyId::DualLittleQJacobi,
        FamilyId::BigQJacobi,
        FamilyId::DualBigQJacobi,
        FamilyId::DiscreteQUltra,
        FamilyId::DiscreteQUltraTilde,
        FamilyId::DualDiscreteQUltra,
        FamilyId::DualDiscreteQUltraTilde,
        FamilyId::BigQLaguerre,
        FamilyId::QMeixner,
        FamilyId::AltQCharlier,
        FamilyId::DualAltQCharlier,
        FamilyId::AlSalamCarlitzI,
        FamilyId::AlSalamCarlitzII,
        FamilyId::QCharlier,
        FamilyId::LittleQLaguerre,
        FamilyId::BilateralASC,
    ];

    pub fn slug(self) -> &'static str {
        use FamilyId::*;
        match self {
            LittleQJacobi => "little-q-jacobi",
            DualLittleQJacobi => "dual-little-q-jacobi",
            BigQJacobi => "big-q-jacobi",
            DualBigQJacobi => "dual-big-q-jacobi",
            DiscreteQUltra => "discrete-q-ultraspherical",
            DiscreteQUltraTilde => "discrete-q-ultraspherical-tilde",
            DualDiscreteQUltra => "dual-discrete-q-ultraspherical",
            DualDiscreteQUltraTilde => "dual-discrete-q-ultraspherical-tilde",
            BigQLaguerre => "big-q-laguerre",
            QMeixner => "q-meixner",
            AltQCharlier => "alt-q-charlier",
            DualAltQCharlier => "dual-alt-q-charlier",
            AlSalamCarlitzI => "al-salam-carlitz-1",
            AlSalamCarlitzII => "al-salam-carlitz-2",
            QCharlier => "q-charlier",
            LittleQLaguerre => "little-q-laguerre",
            BilateralASC => "bilateral-asc",
        }
    }

    /// True for families that are polynomials in a q-quadratic or q-inverse variable.
    pub fn is_dual(self) -> bool {
        use FamilyId::*;
        matches!(
            self,
            DualLittleQJacobi
                | DualBigQJacobi
                | DualDiscreteQUltra
                | DualDiscreteQUltraTilde
                | QMeixner
                | DualAltQCharlier
                | AlSalamCarlitzII
                | QCharlier
        )
    }

    pub fn param_names(self) -> &'static [&'static str] {
        use FamilyId::*;
        match self {
            LittleQJacobi | DualLittleQJacobi | BigQLaguerre | QMeixner => &["a", "b"],
            BigQJacobi | DualBigQJacobi => &["a", "b", "c"],
            BilateralASC => &["t1", "t2", "d"],
            _ => &["a"],
        }
    }

    pub fn constraints(self) -> &'static [&'static str] {
        use FamilyId::*;
        match self {
            LittleQJacobi | DualLittleQJacobi => &["0 < a < 1/q", "b < 1/q"],
            BigQJacobi | DualBigQJacobi => &["0 < a < 1/q", "0 < b < 1/q", "c < 0"],
            DiscreteQUltra | DualDiscreteQUltra => &["0 < a < 1/q^2"],
            DiscreteQUltraTilde | DualDiscreteQUltraTilde | AltQCharlier | DualAltQCharlier | QCharlier => &["a > 0"],
            BigQLaguerre => &["0 < a < 1/q", "b < 0"],
            QMeixner => &["a != 0", "a < 1/q", "b > 0"],
            AlSalamCarlitzI => &["a < 0"],
            AlSalamCarlitzII | LittleQLaguerre => &["0 < a < 1/q"],
            BilateralASC => &["t1 t2 > 0", "q <= d < 1"],
        }
    }

    pub fn lattice_kind(self) -> LatticeKind {
        use FamilyId::*;
        match self {
            LittleQJacobi | BigQJacobi | DiscreteQUltra | DiscreteQUltraTilde | BigQLaguerre | AltQCharlier
            | AlSalamCarlitzI | LittleQLaguerre => LatticeKind::PowerQ,
            QMeixner | AlSalamCarlitzII | QCharlier => LatticeKind::InversePowerQ,
            DualLittleQJacobi | DualBigQJacobi => LatticeKind::MuAB,
            DualAltQCharlier => LatticeKind::MuAlt,
            DualDiscreteQUltra | DualDiscreteQUltraTilde => LatticeKind::MuSigned,
            BilateralASC => LatticeKind::MuBilateral,
        }
    }

    /// Branches of the natural support, in canonical order.
    pub fn branches(self) -> &'static [Branch] {
        use FamilyId::*;
        match self {
            LittleQJacobi | AltQCharlier | LittleQLaguerre => &[Branch::Unit],
            BigQJacobi => &[Branch::A, Branch::C],
            BigQLaguerre => &[Branch::A, Branch::B],
            AlSalamCarlitzI => &[Branch::Unit, Branch::AUnshifted],
            DiscreteQUltra | DiscreteQUltraTilde => &[Branch::SqrtAPlus, Branch::SqrtAMinus],
            DualDiscreteQUltra => &[Branch::Plus],
            DualDiscreteQUltraTilde => &[Branch::Minus],
            _ => &[Branch::Unit],
        }
    }

    pub fn description(self) -> &'static str {
        use FamilyId::*;
        match self {
            LittleQJacobi => "little q-Jacobi p_n(x;a,b|q) = 2phi1(q^-n, ab q^(n+1); aq; q, qx)",
            DualLittleQJacobi => "dual little q-Jacobi d_n(mu(m);a,b|q) = 3phi1(q^-m, ab q^(m+1), q^-n; bq; q, q^n/a)",
            BigQJacobi => "big q-Jacobi P_n(x;a,b,c;q) = 3phi2(q^-n, ab q^(n+1), x; aq, cq; q, q)",
            DualBigQJacobi => {
                "dual big q-Jacobi D_n(mu(m);a,b,c|q) = 3phi2(q^-m, ab q^(m+1), q^-n; aq, abq/c; q, a q^(n+1)/c)"
            }
            DiscreteQUltra => "discrete q-ultraspherical C_n^(a)(x;q) = 3phi2(q^-n, a q^(n+1), x; a^(1/2) q, -a^(1/2) q; q, q)",
            DiscreteQUltraTilde => "discrete q-ultraspherical, imaginary-argument variant (-i)^n C_n^(-a)(ix;q), real rewrite",
            DualDiscreteQUltra => "dual discrete q-ultraspherical on mu(x) = q^-x + a q^(x+1)",
            DualDiscreteQUltraTilde => "dual discrete q-ultraspherical on mu(x) = q^-x - a q^(x+1)",
            BigQLaguerre => "big q-Laguerre P_n(x;a,b;q) = 3phi2(q^-n, 0, x; aq, bq; q, q)",
            QMeixner => "q-Meixner M_n(q^-x;a,b;q) = 2phi1(q^-n, q^-x; aq; q, -q^(n+1)/b)",
            AltQCharlier => "alternative q-Charlier K_n(x;a;q) = 2phi1(q^-n, -a q^n; 0; q, qx)",
            DualAltQCharlier => "dual alternative q-Charlier d_n(mu(m);a|q) = 3phi0(q^-m, -a q^m, q^-n; -; q, -q^n/a)",
            AlSalamCarlitzI => "Al-Salam-Carlitz I U_n^(a)(x;q), orthogonal on q^k and a q^k",
            AlSalamCarlitzII => "Al-Salam-Carlitz II V_n^(a)(x;q) = (-a)^n q^(-n(n-1)/2) 2phi0(q^-n, x; -; q, q^n/a)",
            QCharlier => "q-Charlier C_n(q^-x;a;q) = 2phi1(q^-n, q^-x; 0; q, -q^(n+1)/a)",
            LittleQLaguerre => "little q-Laguerre (Wall) p_n(x;a|q) = 2phi1(q^-n, 0; aq; q, qx)",
            BilateralASC => "polynomials u_n(x;t1,t2|q) with bilateral orthogonality on sinh-type lattices",
        }
    }

    pub fn validate(self, p: &Params, q: f64) -> Result<()> {
        let v = validate_params(self, p, q);
        if v.is_empty() {
            Ok(())
        } else {
            Err(QError::InvalidParams(v))
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for FamilyId {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.slug() == s)
            .ok_or_else(|| QError::InvalidInput(format!("unknown family '{s}'")))
    }
}

/// One row of the serializable family registry.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub tag: FamilyId,
    pub slug: &'static str,
    pub params: &'static [&'static str],
    pub constraints: &'static [&'static str],
    pub lattice_kind: LatticeKind,
    pub branches: &'static [Branch],
    pub description: &'static str,
}

pub fn registry() -> Vec<FamilyInfo> {
    FamilyId::ALL
        .iter()
        .map(|&f| FamilyInfo {
            tag: f,
            slug: f.slug(),
            params: f.param_names(),
            constraints: f.constraints(),
            lattice_kind: f.lattice_kind(),
            branches: f.branches(),
            description: f.description(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.slug().parse::<FamilyId>().unwrap(), f);
        }
        assert!("no-such-family".parse::<FamilyId>().is_err());
    }

    #[test]
    fn registry_is_complete() {
        let r = registry();
        assert_eq!(r.len(), 17);
        assert!(r.iter().all(|e| !e.description.is_empty() && !e.constraints.is_empty()));
    }
}
