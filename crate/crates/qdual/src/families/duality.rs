//! Pointwise duality: a primal polynomial of degree `m` at its `n`-th support
//! point equals an explicit factor times a dual polynomial of degree `n` at
//! lattice index `m`.
//!
//! [`eval_pair`] evaluates both series and keeps the better-conditioned one,
//! so large degrees at small support points (and the reverse) stay accurate.

use serde::Serialize;

use super::series::eval_series_at;
use super::{lattice, Branch, FamilyId, Params, Point};
use crate::error::Result;
use crate::qkernel::{qpoch_ln, LogMag, QContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DualPair {
    LittleQJacobi,
    BigQJacobiA,
    BigQJacobiC,
    BigQLaguerreA,
    BigQLaguerreB,
    AltQCharlier,
    AlSalamCarlitzIUnit,
    AlSalamCarlitzIA,
    LittleQLaguerre,
    DiscreteQUltraPlus,
    DiscreteQUltraMinus,
    DiscreteQUltraTildePlus,
    DiscreteQUltraTildeMinus,
}

/// Value of `p_m(x_n)` with its dual reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeValue {
    /// `p_m(x_n)`.
    pub primal: LogMag,
    /// The dual polynomial of degree `n` at lattice index `m`.
    pub dual: LogMag,
    pub rel_err: f64,
    pub via_dual: bool,
}

fn tri(q: f64, e2: i64) -> LogMag {
    LogMag::from_parts(1.0, 0.5 * e2 as f64 * q.ln())
}

impl DualPair {
    pub const ALL: [DualPair; 13] = [
        DualPair::LittleQJacobi,
        DualPair::BigQJacobiA,
        DualPair::BigQJacobiC,
        DualPair::BigQLaguerreA,
        DualPair::BigQLaguerreB,
        DualPair::AltQCharlier,
        DualPair::AlSalamCarlitzIUnit,
        DualPair::AlSalamCarlitzIA,
        DualPair::LittleQLaguerre,
        DualPair::DiscreteQUltraPlus,
        DualPair::DiscreteQUltraMinus,
        DualPair::DiscreteQUltraTildePlus,
        DualPair::DiscreteQUltraTildeMinus,
    ];

    pub fn primal(self) -> FamilyId {
        use DualPair::*;
        match self {
            LittleQJacobi => FamilyId::LittleQJacobi,
            BigQJacobiA | BigQJacobiC => FamilyId::BigQJacobi,
            BigQLaguerreA | BigQLaguerreB => FamilyId::BigQLaguerre,
            AltQCharlier => FamilyId::AltQCharlier,
            AlSalamCarlitzIUnit | AlSalamCarlitzIA => FamilyId::AlSalamCarlitzI,
            LittleQLaguerre => FamilyId::LittleQLaguerre,
            DiscreteQUltraPlus | DiscreteQUltraMinus => FamilyId::DiscreteQUltra,
            DiscreteQUltraTildePlus | DiscreteQUltraTildeMinus => FamilyId::DiscreteQUltraTilde,
        }
    }

    /// Branch of the primal support.
    pub fn branch(self) -> Branch {
        use DualPair::*;
        match self {
            LittleQJacobi | AltQCharlier | AlSalamCarlitzIUnit | LittleQLaguerre => Branch::Unit,
            BigQJacobiA | BigQLaguerreA => Branch::A,
            BigQJacobiC => Branch::C,
            BigQLaguerreB => Branch::B,
            AlSalamCarlitzIA => Branch::AUnshifted,
            DiscreteQUltraPlus | DiscreteQUltraTildePlus => Branch::SqrtAPlus,
            DiscreteQUltraMinus | DiscreteQUltraTildeMinus => Branch::SqrtAMinus,
        }
    }

    /// Dual family with its parameters, and the branch of its lattice.
    pub fn dual(self, p: &Params) -> (FamilyId, Params, Branch) {
        use DualPair::*;
        let (a, b, c) = (p.a, p.b, p.c);
        match self {
            LittleQJacobi => (FamilyId::DualLittleQJacobi, Params::ab(a, b), Branch::Unit),
            BigQJacobiA => (FamilyId::DualBigQJacobi, Params::abc(a, b, c), Branch::Unit),
            BigQJacobiC => (FamilyId::DualBigQJacobi, Params::abc(b, a, a * b / c), Branch::Unit),
            BigQLaguerreA => (FamilyId::QMeixner, Params::ab(a, -b / a), Branch::Unit),
            BigQLaguerreB => (FamilyId::QMeixner, Params::ab(b, -a / b), Branch::Unit),
            AltQCharlier => (FamilyId::DualAltQCharlier, Params::a(a), Branch::Unit),
            AlSalamCarlitzIUnit => (FamilyId::QCharlier, Params::a(-a), Branch::Unit),
            AlSalamCarlitzIA => (FamilyId::QCharlier, Params::a(-1.0 / a), Branch::Unit),
            LittleQLaguerre => (FamilyId::AlSalamCarlitzII, Params::a(a), Branch::Unit),
            DiscreteQUltraPlus | DiscreteQUltraMinus => (FamilyId::DualDiscreteQUltra, Params::a(a), Branch::Plus),
            DiscreteQUltraTildePlus | DiscreteQUltraTildeMinus => {
                (FamilyId::DualDiscreteQUltraTilde, Params::a(a), Branch::Minus)
            }
        }
    }

    /// Factor `F` in `p_m(x_n) = F(m, n) * dual_n(m)`.
    pub fn prefactor(self, p: &Params, m: usize, n: usize, q: f64) -> LogMag {
        use DualPair::*;
        let (a, b, c) = (p.a, p.b, p.c);
        let mi = m as i64;
        let qm = q.powi(-(m as i32));
        match self {
            LittleQJacobi | BigQJacobiC => {
                qpoch_ln(b * q, q, m) / qpoch_ln(a * q, q, m) * LogMag::from_f64(-a).powi(mi) * tri(q, mi * (mi + 1))
            }
            BigQJacobiA => {
                qpoch_ln(a * b * q / c, q, m) / qpoch_ln(c * q, q, m)
                    * LogMag::from_f64(-c).powi(mi)
                    * tri(q, mi * (mi + 1))
            }
            BigQLaguerreA => qpoch_ln(qm / b, q, m).powi(-1),
            BigQLaguerreB => qpoch_ln(qm / a, q, m).powi(-1),
            AltQCharlier => LogMag::from_f64(-a).powi(mi) * tri(q, 2 * mi * mi),
            AlSalamCarlitzIUnit => LogMag::from_f64(-a).powi(mi) * tri(q, mi * (mi - 1)),
            AlSalamCarlitzIA => LogMag::from_f64(-1.0).powi(mi) * tri(q, mi * (mi - 1)),
            LittleQLaguerre => {
                let ni = n as i64;
                LogMag::from_f64(-a).powi(-ni) * tri(q, ni * (ni - 1)) / qpoch_ln(qm / a, q, m)
            }
            DiscreteQUltraPlus | DiscreteQUltraTildePlus => {
                LogMag::from_f64(a).sqrt().powi(mi) * tri(q, mi * (mi + 1))
            }
            DiscreteQUltraMinus | DiscreteQUltraTildeMinus => {
                LogMag::from_f64(-a.sqrt()).powi(mi) * tri(q, mi * (mi + 1))
            }
        }
    }

    /// `n`-th support point of the primal family on this pair's branch.
    pub fn point(self, p: &Params, n: usize, q: f64) -> Result<f64> {
        lattice(self.primal().lattice_kind(), p, n as i64, self.branch(), q)
    }
}

/// `p_m(x_n)` for the pair, from whichever of the two series is better conditioned.
pub fn eval_pair(pair: DualPair, p: &Params, m: usize, n: usize, ctx: &QContext) -> Result<LatticeValue> {
    let q = ctx.q();
    let x = pair.point(p, n, q)?;
    let direct = eval_series_at(pair.primal(), p, m, Point::X(x), ctx)?;
    let (dual_fid, dual_params, dual_branch) = pair.dual(p);
    let dual = eval_series_at(dual_fid, &dual_params, n, Point::Lattice { m: m as i64, branch: dual_branch }, ctx)?;
    let pref = pair.prefactor(p, m, n, q);
    let (e1, e2) = (direct.relative_error(), dual.relative_error());
    if e2 < e1 {
        let d = dual.log_mag();
        Ok(LatticeValue { primal: pref * d, dual: d, rel_err: e2, via_dual: true })
    } else {
        let v = direct.log_mag();
        Ok(LatticeValue { primal: v, dual: v / pref, rel_err: e1, via_dual: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pair: DualPair) -> Params {
        use DualPair::*;
        match pair {
            LittleQJacobi => Params::ab(0.3, 0.4),
            BigQJacobiA | BigQJacobiC => Params::abc(0.4, 0.7, -0.6),
            BigQLaguerreA | BigQLaguerreB => Params::ab(0.5, -0.4),
            AltQCharlier => Params::a(0.8),
            AlSalamCarlitzIUnit | AlSalamCarlitzIA => Params::a(-0.7),
            LittleQLaguerre => Params::a(0.6),
            _ => Params::a(0.8),
        }
    }

    #[test]
    fn both_readings_agree_where_both_are_accurate() {
        for q in [0.3, 0.5] {
            let ctx = QContext::new(q).unwrap();
            for pair in DualPair::ALL {
                let p = params(pair);
                let (dual_fid, dual_params, dual_branch) = pair.dual(&p);
                for m in 0..7 {
                    for n in 0..7 {
                        let x = pair.point(&p, n, q).unwrap();
                        let direct = eval_series_at(pair.primal(), &p, m, Point::X(x), &ctx).unwrap();
                        let dual = eval_series_at(
                            dual_fid,
                            &dual_params,
                            n,
                            Point::Lattice { m: m as i64, branch: dual_branch },
                            &ctx,
                        )
                        .unwrap();
                        let via = (pair.prefactor(&p, m, n, q) * dual.log_mag()).to_f64();
                        let d = direct.to_f64();
                        let tol = 1e-9 * d.abs().max(via.abs()).max(1e-300)
                            + 1e3 * f64::EPSILON * (direct.abs_sum * direct.ln_scale.exp());
                        assert!((d - via).abs() <= tol, "{pair:?} q={q} m={m} n={n}: {d} vs {via}");
                    }
                }
            }
        }
    }
}
