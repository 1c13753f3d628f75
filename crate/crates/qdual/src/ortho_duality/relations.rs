//! Discrete orthogonality relations `sum_j w_j p_m(x_j) p_m'(x_j) = delta h_m`
//! for every family, with closed-form weights and norms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tail::certified_sum;
use super::ResidualReport;
use crate::error::{QError, Result};
use crate::families::{eval_pair, eval_series_at, Branch, DualPair, FamilyId, Params, Point};
use crate::qkernel::{qpoch_inf_ln, qpoch_ln, LogMag, QContext};

/// Default tolerance for orthogonality and duality residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationId {
    LittleQJacobi,
    DualLittleQJacobi,
    BigQJacobi,
    DualBigQJacobi,
    DiscreteQUltraEven,
    DiscreteQUltraOdd,
    DiscreteQUltraFull,
    DiscreteQUltraTildeEven,
    DiscreteQUltraTildeOdd,
    DiscreteQUltraTildeFull,
    DualDiscreteQUltraEvenLattice,
    DualDiscreteQUltraOddLattice,
    DualDiscreteQUltraTildeEvenLattice,
    DualDiscreteQUltraTildeOddLattice,
    BigQLaguerre,
    QMeixner,
    AltQCharlier,
    DualAltQCharlier,
    AlSalamCarlitzI,
    QCharlier,
    LittleQLaguerre,
    AlSalamCarlitzII,
    Bilateral,
    /// Bilateral relation for the imaginary-argument discrete
    /// q-ultraspherical duals, parameters `a` and `d`, in base `q^2`.
    BilateralTilde,
}

impl RelationId {
    pub const ALL: [RelationId; 24] = [
        RelationId::LittleQJacobi,
        RelationId::DualLittleQJacobi,
        RelationId::BigQJacobi,
        RelationId::DualBigQJacobi,
        RelationId::DiscreteQUltraEven,
        RelationId::DiscreteQUltraOdd,
        RelationId::DiscreteQUltraFull,
        RelationId::DiscreteQUltraTildeEven,
        RelationId::DiscreteQUltraTildeOdd,
        RelationId::DiscreteQUltraTildeFull,
        RelationId::DualDiscreteQUltraEvenLattice,
        RelationId::DualDiscreteQUltraOddLattice,
        RelationId::DualDiscreteQUltraTildeEvenLattice,
        RelationId::DualDiscreteQUltraTildeOddLattice,
        RelationId::BigQLaguerre,
        RelationId::QMeixner,
        RelationId::AltQCharlier,
        RelationId::DualAltQCharlier,
        RelationId::AlSalamCarlitzI,
        RelationId::QCharlier,
        RelationId::LittleQLaguerre,
        RelationId::AlSalamCarlitzII,
        RelationId::Bilateral,
        RelationId::BilateralTilde,
    ];

    pub fn slug(self) -> &'static str {
        use RelationId::*;
        match self {
            LittleQJacobi => "little-q-jacobi",
            DualLittleQJacobi => "dual-little-q-jacobi",
            BigQJacobi => "big-q-jacobi",
            DualBigQJacobi => "dual-big-q-jacobi",
            DiscreteQUltraEven => "discrete-q-ultraspherical-even",
            DiscreteQUltraOdd => "discrete-q-ultraspherical-odd",
            DiscreteQUltraFull => "discrete-q-ultraspherical",
            DiscreteQUltraTildeEven => "discrete-q-ultraspherical-tilde-even",
            DiscreteQUltraTildeOdd => "discrete-q-ultraspherical-tilde-odd",
            DiscreteQUltraTildeFull => "discrete-q-ultraspherical-tilde",
            DualDiscreteQUltraEvenLattice => "dual-discrete-q-ultraspherical-even-lattice",
            DualDiscreteQUltraOddLattice => "dual-discrete-q-ultraspherical-odd-lattice",
            DualDiscreteQUltraTildeEvenLattice => "dual-discrete-q-ultraspherical-tilde-even-lattice",
            DualDiscreteQUltraTildeOddLattice => "dual-discrete-q-ultraspherical-tilde-odd-lattice",
            BigQLaguerre => "big-q-laguerre",
            QMeixner => "q-meixner",
            AltQCharlier => "alt-q-charlier",
            DualAltQCharlier => "dual-alt-q-charlier",
            AlSalamCarlitzI => "al-salam-carlitz-1",
            QCharlier => "q-charlier",
            LittleQLaguerre => "little-q-laguerre",
            AlSalamCarlitzII => "al-salam-carlitz-2",
            Bilateral => "bilateral-asc",
            BilateralTilde => "bilateral-discrete-q-ultraspherical-tilde",
        }
    }

    /// Descriptive label of the relation.
    pub fn citation(self) -> &'static str {
        use RelationId::*;
        match self {
            LittleQJacobi => "little q-Jacobi orthogonality on q^j",
            DualLittleQJacobi => "dual little q-Jacobi orthogonality on q^-j + ab q^(j+1)",
            BigQJacobi => "big q-Jacobi orthogonality on a q^(j+1) and c q^(j+1)",
            DualBigQJacobi => "dual big q-Jacobi orthogonality on q^-j + ab q^(j+1)",
            DiscreteQUltraEven => "discrete q-ultraspherical even degrees on sqrt(a) q^(j+1)",
            DiscreteQUltraOdd => "discrete q-ultraspherical odd degrees on sqrt(a) q^(j+1)",
            DiscreteQUltraFull => "discrete q-ultraspherical orthogonality on +-sqrt(a) q^(j+1)",
            DiscreteQUltraTildeEven => "imaginary-argument discrete q-ultraspherical even degrees",
            DiscreteQUltraTildeOdd => "imaginary-argument discrete q-ultraspherical odd degrees",
            DiscreteQUltraTildeFull => "imaginary-argument discrete q-ultraspherical on +-sqrt(a) q^(j+1)",
            DualDiscreteQUltraEvenLattice => "dual discrete q-ultraspherical on mu(2j)",
            DualDiscreteQUltraOddLattice => "dual discrete q-ultraspherical on mu(2j+1)",
            DualDiscreteQUltraTildeEvenLattice => "dual imaginary-argument discrete q-ultraspherical on mu(2j)",
            DualDiscreteQUltraTildeOddLattice => "dual imaginary-argument discrete q-ultraspherical on mu(2j+1)",
            BigQLaguerre => "big q-Laguerre orthogonality on a q^(j+1) and b q^(j+1)",
            QMeixner => "q-Meixner orthogonality on q^-j",
            AltQCharlier => "alternative q-Charlier orthogonality on q^j",
            DualAltQCharlier => "dual alternative q-Charlier orthogonality on q^-j - a q^j",
            AlSalamCarlitzI => "Al-Salam-Carlitz I orthogonality on q^j and a q^j",
            QCharlier => "q-Charlier orthogonality on q^-j",
            LittleQLaguerre => "little q-Laguerre orthogonality on q^j",
            AlSalamCarlitzII => "Al-Salam-Carlitz II orthogonality on q^-j",
            Bilateral => "bilateral orthogonality of u_n on (q^-j/d - d q^j)/2, j in Z",
            BilateralTilde => "bilateral orthogonality of the imaginary-argument dual q-ultraspherical polynomials",
        }
    }

    /// Family whose polynomials appear in the relation.
    pub fn family(self) -> FamilyId {
        use RelationId::*;
        match self {
            LittleQJacobi => FamilyId::LittleQJacobi,
            DualLittleQJacobi => FamilyId::DualLittleQJacobi,
            BigQJacobi => FamilyId::BigQJacobi,
            DualBigQJacobi => FamilyId::DualBigQJacobi,
            DiscreteQUltraEven | DiscreteQUltraOdd | DiscreteQUltraFull => FamilyId::DiscreteQUltra,
            DiscreteQUltraTildeEven | DiscreteQUltraTildeOdd | DiscreteQUltraTildeFull => {
                FamilyId::DiscreteQUltraTilde
            }
            DualDiscreteQUltraEvenLattice | DualDiscreteQUltraOddLattice => FamilyId::DualDiscreteQUltra,
            DualDiscreteQUltraTildeEvenLattice | DualDiscreteQUltraTildeOddLattice => {
                FamilyId::DualDiscreteQUltraTilde
            }
            BigQLaguerre => FamilyId::BigQLaguerre,
            QMeixner => FamilyId::QMeixner,
            AltQCharlier => FamilyId::AltQCharlier,
            DualAltQCharlier => FamilyId::DualAltQCharlier,
            AlSalamCarlitzI => FamilyId::AlSalamCarlitzI,
            QCharlier => FamilyId::QCharlier,
            LittleQLaguerre => FamilyId::LittleQLaguerre,
            AlSalamCarlitzII => FamilyId::AlSalamCarlitzII,
            Bilateral | BilateralTilde => FamilyId::BilateralASC,
        }
    }

    /// Branches of the support summed over, in canonical order.
    pub fn support(self) -> &'static [Branch] {
        use RelationId::*;
        match self {
            BigQJacobi => &[Branch::A, Branch::C],
            BigQLaguerre => &[Branch::A, Branch::B],
            AlSalamCarlitzI => &[Branch::Unit, Branch::AUnshifted],
            DiscreteQUltraEven | DiscreteQUltraOdd | DiscreteQUltraTildeEven | DiscreteQUltraTildeOdd => {
                &[Branch::SqrtAPlus]
            }
            DiscreteQUltraFull | DiscreteQUltraTildeFull => &[Branch::SqrtAPlus, Branch::SqrtAMinus],
            _ => &[Branch::Unit],
        }
    }

    /// True if the support index runs over all integers.
    pub fn is_bilateral(self) -> bool {
        matches!(self, RelationId::Bilateral | RelationId::BilateralTilde)
    }

    /// Caveat attached to reports of relations whose measure is not known to
    /// be the unique one. Only the relation itself is checked.
    pub fn caveat(self) -> Option<&'static str> {
        match self {
            RelationId::Bilateral | RelationId::BilateralTilde => {
                Some("extremality of the bilateral measures is not established")
            }
            RelationId::DualAltQCharlier => Some("determinacy of the associated moment problem is not settled"),
            _ => None,
        }
    }

    /// In-domain parameter point used by the default check grids.
    pub fn default_params(self) -> Params {
        use RelationId::*;
        match self {
            LittleQJacobi | DualLittleQJacobi => Params::ab(0.3, 0.4),
            BigQJacobi | DualBigQJacobi => Params::abc(0.3, 0.4, -0.5),
            BigQLaguerre => Params::ab(0.4, -0.3),
            QMeixner => Params::ab(0.4, 0.75),
            AltQCharlier | DualAltQCharlier => Params::a(0.7),
            AlSalamCarlitzI => Params::a(-0.6),
            QCharlier => Params::a(0.6),
            LittleQLaguerre | AlSalamCarlitzII => Params::a(0.5),
            Bilateral => Params::bilateral(0.7, 1.3, 0.6),
            BilateralTilde => Params { a: 1.0, d: 0.7, ..Params::default() },
            _ => Params::a(0.8),
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for RelationId {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        RelationId::ALL
            .iter()
            .copied()
            .find(|r| r.slug() == s)
            .ok_or_else(|| QError::InvalidInput(format!("unknown orthogonality relation '{s}'")))
    }
}

/// Deliberate corruptions of a weight, used as negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    #[default]
    None,
    /// Every weight multiplied by `q`, as if a constant exponent were off by one.
    ConstantExponent,
    /// Weight at support index `j` multiplied by `q^j`.
    IndexExponent,
}

/// An orthogonality relation at a concrete parameter point.
#[derive(Debug, Clone, Copy)]
pub struct OrthoSpec {
    pub relation: RelationId,
    pub params: Params,
    pub q: f64,
    pub perturbation: Perturbation,
    ctx: QContext,
    /// Parameters and context handed to the family evaluators.
    family_params: Params,
    family_ctx: QContext,
}

fn tri(q: f64, e2: i64) -> LogMag {
    LogMag::from_parts(1.0, 0.5 * e2 as f64 * q.ln())
}

fn pw(x: f64, k: i64) -> LogMag {
    LogMag::from_f64(x).powi(k)
}

fn lm(x: f64) -> LogMag {
    LogMag::from_f64(x)
}

impl OrthoSpec {
    pub fn new(relation: RelationId, params: Params, q: f64) -> Result<Self> {
        Self::with_context(relation, params, QContext::new(q)?)
    }

    pub fn with_context(relation: RelationId, params: Params, ctx: QContext) -> Result<Self> {
        let q = ctx.q();
        let (family_params, family_ctx) = if relation == RelationId::BilateralTilde {
            if !(params.a > 0.0) {
                return Err(QError::InvalidParams(vec![format!("a = {} must be positive", params.a)]));
            }
            let t1 = (q.powi(3) / params.a).sqrt();
            let t2 = (q / params.a).sqrt();
            (Params::bilateral(t1, t2, params.d), ctx.with_base(q * q)?)
        } else {
            (params, ctx)
        };
        relation.family().validate(&family_params, family_ctx.q())?;
        Ok(Self { relation, params, q, perturbation: Perturbation::None, ctx, family_params, family_ctx })
    }

    pub fn perturbed(mut self, perturbation: Perturbation) -> Self {
        self.perturbation = perturbation;
        self
    }

    pub fn citation(&self) -> &'static str {
        self.relation.citation()
    }

    /// Polynomial degree carried by relation index `m`.
    pub fn degree(&self, m: usize) -> usize {
        use RelationId::*;
        match self.relation {
            DiscreteQUltraEven | DiscreteQUltraTildeEven => 2 * m,
            DiscreteQUltraOdd | DiscreteQUltraTildeOdd => 2 * m + 1,
            _ => m,
        }
    }

    fn branch_index(&self, branch: Branch) -> Result<usize> {
        self.relation
            .support()
            .iter()
            .position(|&b| b == branch)
            .ok_or_else(|| QError::InvalidBranch(format!("{branch} is not a support branch of {}", self.relation)))
    }

    fn pinf(&self, x: f64) -> Result<LogMag> {
        qpoch_inf_ln(x, &self.ctx)
    }

    /// Weight at support index `j` on `branch`, in log form, including any
    /// branch-dependent constant.
    pub fn weight_ln(&self, j: i64, branch: Branch) -> Result<LogMag> {
        use RelationId::*;
        self.branch_index(branch)?;
        if j < 0 && !self.relation.is_bilateral() {
            return Err(QError::InvalidInput(format!("support index {j} must be non-negative")));
        }
        let q = self.q;
        let Params { a, b, c, .. } = self.params;
        let ju = j.max(0) as usize;
        let pl = |x: f64, n: usize| qpoch_ln(x, q, n);
        let w = match self.relation {
            LittleQJacobi => pl(b * q, ju) * pw(a * q, j) / pl(q, ju),
            DualLittleQJacobi => {
                lm(1.0 - a * b * q.powi(2 * j as i32 + 1)) * pl(a * b * q, ju) * pl(b * q, ju)
                    / (lm(1.0 - a * b * q) * pl(a * q, ju) * pl(q, ju))
                    * pw(a, j)
                    * tri(q, 2 * j * j)
            }
            BigQJacobi => {
                if branch == Branch::A {
                    self.pinf(b * q)? * self.pinf(c * q)? / (self.pinf(a * b * q * q)? * self.pinf(c / a)?)
                        * pl(a * q, ju)
                        * pl(a * b * q / c, ju)
                        * pw(q, j)
                        / (pl(a * q / c, ju) * pl(q, ju))
                } else {
                    self.pinf(a * q)? * self.pinf(a * b * q / c)? / (self.pinf(a * b * q * q)? * self.pinf(a / c)?)
                        * pl(b * q, ju)
                        * pl(c * q, ju)
                        * pw(q, j)
                        / (pl(c * q / a, ju) * pl(q, ju))
                }
            }
            DualBigQJacobi => {
                lm(1.0 - a * b * q.powi(2 * j as i32 + 1)) * pl(a * q, ju) * pl(a * b * q, ju) * pl(a * b * q / c, ju)
                    / (lm(1.0 - a * b * q) * pl(b * q, ju) * pl(c * q, ju) * pl(q, ju))
                    * pw(-c / a, j)
                    * tri(q, j * (j - 1))
            }
            DiscreteQUltraEven | DiscreteQUltraOdd | DiscreteQUltraFull => {
                qpoch_ln(a * q * q, q * q, ju) * pw(q, j) / qpoch_ln(q * q, q * q, ju)
            }
            DiscreteQUltraTildeEven | DiscreteQUltraTildeOdd | DiscreteQUltraTildeFull => {
                qpoch_ln(-a * q * q, q * q, ju) * pw(q, j) / qpoch_ln(q * q, q * q, ju)
            }
            DualDiscreteQUltraEvenLattice | DualDiscreteQUltraTildeEvenLattice => {
                let aa = self.signed_a();
                lm(1.0 - aa * q.powi(4 * j as i32 + 1)) * pl(aa * q, 2 * ju)
                    / (lm(1.0 - aa * q) * pl(q, 2 * ju))
                    * tri(q, 2 * j * (2 * j - 1))
            }
            DualDiscreteQUltraOddLattice | DualDiscreteQUltraTildeOddLattice => {
                let aa = self.signed_a();
                lm(1.0 - aa * q.powi(4 * j as i32 + 3)) * pl(aa * q, 2 * ju + 1)
                    / (lm(1.0 - aa * q) * pl(q, 2 * ju + 1))
                    * tri(q, 2 * j * (2 * j + 1))
            }
            BigQLaguerre => {
                if branch == Branch::A {
                    self.pinf(b * q)? / self.pinf(b / a)? * pl(a * q, ju) * pw(q, j) / (pl(a * q / b, ju) * pl(q, ju))
                } else {
                    self.pinf(a * q)? / self.pinf(a / b)? * pl(b * q, ju) * pw(q, j) / (pl(b * q / a, ju) * pl(q, ju))
                }
            }
            QMeixner => pl(a * q, ju) * pw(b, j) * tri(q, j * (j - 1)) / (pl(-a * b * q, ju) * pl(q, ju)),
            AltQCharlier => pw(a, j) * tri(q, j * (j + 1)) / pl(q, ju),
            DualAltQCharlier => {
                lm(1.0 + a * q.powi(2 * j as i32)) * pw(a, j) * tri(q, j * (3 * j - 1))
                    / (self.pinf(-a * q.powi(j as i32))? * pl(q, ju))
            }
            AlSalamCarlitzI => {
                if branch == Branch::Unit {
                    pw(q, j) / (pl(q / a, ju) * pl(q, ju) * self.pinf(a)?)
                } else {
                    pw(q, j) / (pl(a * q, ju) * pl(q, ju) * self.pinf(1.0 / a)?)
                }
            }
            QCharlier => pw(a, j) * tri(q, j * (j - 1)) / pl(q, ju),
            LittleQLaguerre => pw(a * q, j) / pl(q, ju),
            AlSalamCarlitzII => tri(q, 2 * j * j) * pw(a, j) / (pl(q, ju) * pl(a * q, ju)),
            Bilateral | BilateralTilde => self.bilateral_weight(j)?,
        };
        Ok(match self.perturbation {
            Perturbation::None => w,
            Perturbation::ConstantExponent => w * lm(q),
            Perturbation::IndexExponent => w * pw(q, j),
        })
    }

    /// Weight at support index `j` on `branch`.
    ///
    /// Fails with [`QError::DomainViolation`] if the weight is not positive,
    /// except for the bilateral relations whose point masses carry signs.
    pub fn weight(&self, j: i64, branch: Branch) -> Result<f64> {
        let w = self.weight_ln(j, branch)?;
        if !self.relation.is_bilateral() && w.sign <= 0.0 {
            return Err(QError::DomainViolation(format!(
                "weight of {} at index {j} is not positive; check the parameters",
                self.relation
            )));
        }
        Ok(w.to_f64())
    }

    fn signed_a(&self) -> f64 {
        match self.relation {
            RelationId::DualDiscreteQUltraTildeEvenLattice | RelationId::DualDiscreteQUltraTildeOddLattice => {
                -self.params.a
            }
            _ => self.params.a,
        }
    }

    fn bilateral_weight(&self, j: i64) -> Result<LogMag> {
        let ctx = &self.family_ctx;
        let q = ctx.q();
        let Params { t1, t2, d, .. } = self.family_params;
        let qj = q.powi(j as i32);
        let mut num = LogMag::ONE;
        for x in [-t1 / (qj * d), t1 * qj * d, -t2 / (qj * d), t2 * qj * d] {
            num = num * qpoch_inf_ln(x, ctx)?;
        }
        let den = qpoch_inf_ln(-t1 * t2 / q, ctx)?
            * qpoch_inf_ln(-d * d, ctx)?
            * qpoch_inf_ln(-q / (d * d), ctx)?
            * qpoch_inf_ln(q, ctx)?;
        Ok(num / den * pw(d, 4 * j) * tri(q, 2 * j * (2 * j - 1)) * lm(1.0 + d * d * qj * qj))
    }

    /// Norm `h` of relation index `m`, in log form.
    pub fn norm_ln(&self, m: usize) -> Result<LogMag> {
        use RelationId::*;
        let q = self.q;
        let Params { a, b, c, .. } = self.params;
        let mi = m as i64;
        let pl = |x: f64, n: usize| qpoch_ln(x, q, n);
        Ok(match self.relation {
            LittleQJacobi => {
                self.pinf(a * b * q * q)? / self.pinf(a * q)? * lm(1.0 - a * b * q) * pw(a * q, mi) * pl(b * q, m) * pl(q, m)
                    / (lm(1.0 - a * b * q.powi(2 * m as i32 + 1)) * pl(a * b * q, m) * pl(a * q, m))
            }
            DualLittleQJacobi => {
                self.pinf(a * b * q * q)? / self.pinf(a * q)? * pl(q, m) * pw(a * q, -mi) / pl(b * q, m)
            }
            BigQJacobi => {
                lm(1.0 - a * b * q) * pl(b * q, m) * pl(a * b * q / c, m) * pl(q, m)
                    / (lm(1.0 - a * b * q.powi(2 * m as i32 + 1)) * pl(a * q, m) * pl(a * b * q, m) * pl(c * q, m))
                    * pw(-a * c, mi)
                    * tri(q, mi * (mi + 3))
            }
            DualBigQJacobi => {
                self.pinf(a * b * q * q)? * self.pinf(c / a)? / (self.pinf(b * q)? * self.pinf(c * q)?) * pl(a * q / c, m)
                    * pl(q, m)
                    / (pl(a * q, m) * pl(a * b * q / c, m) * pw(q, mi))
            }
            DiscreteQUltraEven | DiscreteQUltraOdd | DiscreteQUltraFull => self.dqu_norm(self.degree(m), 1.0)?,
            DiscreteQUltraTildeEven | DiscreteQUltraTildeOdd | DiscreteQUltraTildeFull => {
                self.dqu_norm(self.degree(m), -1.0)?
            }
            DualDiscreteQUltraEvenLattice
            | DualDiscreteQUltraOddLattice
            | DualDiscreteQUltraTildeEvenLattice
            | DualDiscreteQUltraTildeOddLattice => {
                let aa = self.signed_a();
                let base = self.ctx.with_base(q * q)?;
                let qq = q * q;
                qpoch_inf_ln(aa * q.powi(3), &base)? / qpoch_inf_ln(q, &base)? * qpoch_ln(qq, qq, m) * pw(q, -mi)
                    / qpoch_ln(aa * qq, qq, m)
            }
            BigQLaguerre => pl(q, m) / (pl(a * q, m) * pl(b * q, m)) * pw(-a * b, mi) * tri(q, mi * (mi + 3)),
            QMeixner => {
                self.pinf(-b)? / self.pinf(-a * b * q)? * pl(-q / b, m) * pl(q, m) / (pl(a * q, m) * pw(q, mi))
            }
            AltQCharlier => {
                self.pinf(-a * q.powi(m as i32))? * pw(a, mi) * pl(q, m) * tri(q, mi * (mi + 1))
                    / lm(1.0 + a * q.powi(2 * m as i32))
            }
            DualAltQCharlier => pl(q, m) / (pw(a, mi) * tri(q, mi * (mi + 1))),
            AlSalamCarlitzI => pw(-a, mi) * pl(q, m) * tri(q, mi * (mi - 1)),
            QCharlier => self.pinf(-a)? * pw(q, -mi) * pl(-q / a, m) * pl(q, m),
            LittleQLaguerre => pw(a * q, mi) * pl(q, m) / (self.pinf(a * q)? * pl(a * q, m)),
            AlSalamCarlitzII => pw(a, mi) * pl(q, m) / (self.pinf(a * q)? * tri(q, 2 * mi * mi)),
            Bilateral | BilateralTilde => {
                let fq = self.family_ctx.q();
                let Params { t1, t2, .. } = self.family_params;
                qpoch_ln(fq, fq, m) * pw(t1 / t2, mi) / (qpoch_ln(-fq * fq / (t1 * t2), fq, m) * pw(fq, mi))
            }
        })
    }

    /// Norm `h` of relation index `m`. Relations summed over both signed
    /// branches of the discrete q-ultraspherical support carry twice the
    /// single-branch norm.
    pub fn norm_h(&self, m: usize) -> Result<f64> {
        Ok(self.norm_ln(m)?.to_f64())
    }

    fn dqu_norm(&self, n: usize, sgn: f64) -> Result<LogMag> {
        let q = self.q;
        let a = self.params.a;
        let ni = n as i64;
        let base = self.ctx.with_base(q * q)?;
        let pre = qpoch_inf_ln(sgn * a * q.powi(3), &base)? / qpoch_inf_ln(q, &base)? * lm(1.0 - sgn * a * q);
        let h = pre * pw(a, ni) / lm(1.0 - sgn * a * q.powi(2 * n as i32 + 1)) * qpoch_ln(q, q, n) * tri(q, ni * (ni + 3))
            / qpoch_ln(sgn * a * q, q, n);
        let both = matches!(self.relation, RelationId::DiscreteQUltraFull | RelationId::DiscreteQUltraTildeFull);
        Ok(if both { h * lm(2.0) } else { h })
    }

    /// Support point at index `j` on `branch`.
    pub fn point(&self, j: i64, branch: Branch) -> Result<f64> {
        use RelationId::*;
        self.branch_index(branch)?;
        let (kind_fid, idx, br) = match self.relation {
            DualDiscreteQUltraEvenLattice | DualDiscreteQUltraTildeEvenLattice => {
                (self.relation.family(), 2 * j, self.relation.family().branches()[0])
            }
            DualDiscreteQUltraOddLattice | DualDiscreteQUltraTildeOddLattice => {
                (self.relation.family(), 2 * j + 1, self.relation.family().branches()[0])
            }
            _ => (self.relation.family(), j, branch),
        };
        crate::families::lattice(kind_fid.lattice_kind(), &self.family_params, idx, br, self.family_ctx.q())
    }

    /// Polynomial of relation index `m` at support index `j`, in log form.
    pub fn value(&self, m: usize, j: i64, branch: Branch) -> Result<LogMag> {
        use RelationId::*;
        self.branch_index(branch)?;
        let n = self.degree(m);
        let ctx = &self.ctx;
        let p = &self.params;
        let ju = j.max(0) as usize;
        let primal = |pair: DualPair| -> Result<LogMag> { Ok(eval_pair(pair, p, n, ju, ctx)?.primal) };
        match self.relation {
            LittleQJacobi => primal(DualPair::LittleQJacobi),
            BigQJacobi => primal(if branch == Branch::A { DualPair::BigQJacobiA } else { DualPair::BigQJacobiC }),
            DiscreteQUltraEven | DiscreteQUltraOdd | DiscreteQUltraFull => primal(if branch == Branch::SqrtAPlus {
                DualPair::DiscreteQUltraPlus
            } else {
                DualPair::DiscreteQUltraMinus
            }),
            DiscreteQUltraTildeEven | DiscreteQUltraTildeOdd | DiscreteQUltraTildeFull => {
                primal(if branch == Branch::SqrtAPlus {
                    DualPair::DiscreteQUltraTildePlus
                } else {
                    DualPair::DiscreteQUltraTildeMinus
                })
            }
            BigQLaguerre => primal(if branch == Branch::A { DualPair::BigQLaguerreA } else { DualPair::BigQLaguerreB }),
            AltQCharlier => primal(DualPair::AltQCharlier),
            AlSalamCarlitzI => primal(if branch == Branch::Unit {
                DualPair::AlSalamCarlitzIUnit
            } else {
                DualPair::AlSalamCarlitzIA
            }),
            LittleQLaguerre => primal(DualPair::LittleQLaguerre),
            DualDiscreteQUltraEvenLattice | DualDiscreteQUltraTildeEvenLattice => {
                dual_value(self.relation.family(), p, n, 2 * ju, ctx)
            }
            DualDiscreteQUltraOddLattice | DualDiscreteQUltraTildeOddLattice => {
                dual_value(self.relation.family(), p, n, 2 * ju + 1, ctx)
            }
            DualLittleQJacobi | DualBigQJacobi | QMeixner | DualAltQCharlier | QCharlier | AlSalamCarlitzII => {
                dual_value(self.relation.family(), p, n, ju, ctx)
            }
            Bilateral | BilateralTilde => {
                let fid = self.relation.family();
                let pt = Point::Lattice { m: j, branch: Branch::Unit };
                Ok(eval_series_at(fid, &self.family_params, n, pt, &self.family_ctx)?.log_mag())
            }
        }
    }
}

/// A dual family expressed through a primal pair, when the primal parameters
/// are admissible.
fn pair_for_dual(fid: FamilyId, p: &Params) -> Option<(DualPair, Params)> {
    let (a, b) = (p.a, p.b);
    match fid {
        FamilyId::DualLittleQJacobi => Some((DualPair::LittleQJacobi, *p)),
        FamilyId::DualBigQJacobi => Some((DualPair::BigQJacobiA, *p)),
        FamilyId::QMeixner if a > 0.0 => Some((DualPair::BigQLaguerreA, Params::ab(a, -a * b))),
        FamilyId::QMeixner => Some((DualPair::BigQLaguerreB, Params::ab(-a * b, a))),
        FamilyId::DualAltQCharlier => Some((DualPair::AltQCharlier, Params::a(a))),
        FamilyId::QCharlier => Some((DualPair::AlSalamCarlitzIUnit, Params::a(-a))),
        FamilyId::AlSalamCarlitzII => Some((DualPair::LittleQLaguerre, Params::a(a))),
        FamilyId::DualDiscreteQUltra => Some((DualPair::DiscreteQUltraPlus, Params::a(a))),
        FamilyId::DualDiscreteQUltraTilde => Some((DualPair::DiscreteQUltraTildePlus, Params::a(a))),
        _ => None,
    }
}

/// Dual polynomial of degree `n` at lattice index `m`, through the better
/// conditioned of its own series and the primal series.
fn dual_value(fid: FamilyId, p: &Params, n: usize, m: usize, ctx: &QContext) -> Result<LogMag> {
    if let Some((pair, pp)) = pair_for_dual(fid, p) {
        if pair.primal().validate(&pp, ctx.q()).is_ok() {
            return Ok(eval_pair(pair, &pp, m, n, ctx)?.dual);
        }
    }
    let branch = fid.branches()[0];
    Ok(eval_series_at(fid, p, n, Point::Lattice { m: m as i64, branch }, ctx)?.log_mag())
}

/// Result of one truncated orthogonality sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthoResidual {
    /// `|sum - delta h_m| / sqrt(h_m h_m2)`.
    pub residual: f64,
    pub tail_bound: f64,
    /// Support points summed, over all branches and both directions.
    pub points: usize,
}

/// Truncated relation sum between relation indices `m` and `m2`, normalized
/// by `sqrt(h_m h_m2)` so that the diagonal target is one.
///
/// At most `m_trunc` points are taken per branch (and per direction for the
/// bilateral relations); the tail beyond the stopping point is bounded from
/// the decay of the terms and must fall below `tol / 10`.
pub fn ortho_residual_detailed(spec: &OrthoSpec, m: usize, m2: usize, m_trunc: usize, tol: f64) -> Result<OrthoResidual> {
    let scale = (spec.norm_ln(m)? * spec.norm_ln(m2)?).sqrt();
    let min_terms = spec.degree(m.max(m2)) + 2;
    let mut total = 0.0;
    let mut tail = 0.0;
    let mut points = 0;
    let directions: &[i64] = if spec.relation.is_bilateral() { &[1, -1] } else { &[1] };
    for &branch in spec.relation.support() {
        for &dir in directions {
            let offset = if dir < 0 { 1 } else { 0 };
            let term = |k: usize| -> Result<f64> {
                let j = dir * (k as i64 + offset);
                let t = spec.weight_ln(j, branch)? * spec.value(m, j, branch)? * spec.value(m2, j, branch)? / scale;
                Ok(t.to_f64())
            };
            let s = certified_sum(term, min_terms, m_trunc, tol / 10.0)?;
            total += s.sum;
            tail += s.tail_bound;
            points += s.terms;
        }
    }
    let target = if m == m2 { 1.0 } else { 0.0 };
    Ok(OrthoResidual { residual: (total - target).abs(), tail_bound: tail, points })
}

/// Normalized residual of the relation between indices `m` and `m2` at the
/// default tolerance.
pub fn ortho_residual(spec: &OrthoSpec, m: usize, m2: usize, m_trunc: usize) -> Result<f64> {
    Ok(ortho_residual_detailed(spec, m, m2, m_trunc, DEFAULT_TOLERANCE)?.residual)
}

pub fn weight(spec: &OrthoSpec, j: i64, branch: Branch) -> Result<f64> {
    spec.weight(j, branch)
}

pub fn norm_h(spec: &OrthoSpec, n: usize) -> Result<f64> {
    spec.norm_h(n)
}

/// Largest residual over all index pairs `m <= m2 <= max_index`.
pub fn relation_report(spec: &OrthoSpec, max_index: usize, m_trunc: usize, tol: f64) -> Result<ResidualReport> {
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    let mut tail: f64 = 0.0;
    let mut points = 0;
    for m in 0..=max_index {
        for m2 in m..=max_index {
            let r = ortho_residual_detailed(spec, m, m2, m_trunc, tol)?;
            if m == m2 {
                diag = diag.max(r.residual);
            } else {
                off = off.max(r.residual);
            }
            tail = tail.max(r.tail_bound);
            points = points.max(r.points);
        }
    }
    Ok(ResidualReport::new(
        format!("ortho/{}", spec.relation),
        spec.citation(),
        spec.params,
        spec.q,
        vec![max_index + 1, points],
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
    fn every_relation_holds() {
        for q in [0.3, 0.5] {
            for r in RelationId::ALL {
                let spec = OrthoSpec::new(r, r.default_params(), q).unwrap();
                let top = if r.is_bilateral() { 4 } else { 6 };
                let rep = relation_report(&spec, top, 400, 1e-9).unwrap();
                assert!(rep.pass, "{r} q={q}: diag {} off {}", rep.max_diag_dev, rep.max_offdiag);
            }
        }
    }

    #[test]
    fn alt_q_charlier_weight_example() {
        let spec = OrthoSpec::new(RelationId::AltQCharlier, Params::a(1.0), 0.5).unwrap();
        assert!((spec.weight(2, Branch::Unit).unwrap() - 0.125 / 0.375).abs() < 1e-15);
        let lqj = OrthoSpec::new(RelationId::LittleQJacobi, Params::ab(0.2, 0.1), 0.5).unwrap();
        assert_eq!(lqj.weight(0, Branch::Unit).unwrap(), 1.0);
    }

    #[test]
    fn q_meixner_weights_positive_for_negative_big_laguerre_b() {
        // Big q-Laguerre b < 0 maps to q-Meixner second parameter -b/a > 0.
        let (a, b) = (0.4, -0.3);
        let spec = OrthoSpec::new(RelationId::QMeixner, Params::ab(a, -b / a), 0.5).unwrap();
        for j in 0..200 {
            assert!(spec.weight(j, Branch::Unit).unwrap() > 0.0 || spec.weight_ln(j, Branch::Unit).unwrap().sign > 0.0);
        }
    }

    #[test]
    fn norm_examples() {
        let q = 0.5;
        let ctx = QContext::new(q).unwrap();
        let lqj = OrthoSpec::new(RelationId::LittleQJacobi, Params::ab(0.2, 0.1), q).unwrap();
        let expected = qpoch_inf_ln(0.02 * q * q, &ctx).unwrap() / qpoch_inf_ln(0.2 * q, &ctx).unwrap();
        assert!((lqj.norm_h(0).unwrap() - expected.to_f64()).abs() < 1e-15);

        let daqc = OrthoSpec::new(RelationId::DualAltQCharlier, Params::a(1.0), q).unwrap();
        assert!((daqc.norm_h(0).unwrap() - 1.0).abs() < 1e-15);

        let lql = OrthoSpec::new(RelationId::LittleQLaguerre, Params::a(0.5), q).unwrap();
        let aq = 0.25;
        let expected = aq * (1.0 - q) / (qpoch_inf_ln(aq, &ctx).unwrap().to_f64() * (1.0 - aq));
        assert!((lql.norm_h(1).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn q_binomial_diagonal_at_zero() {
        let spec = OrthoSpec::new(RelationId::LittleQJacobi, Params::ab(0.2, 0.1), 0.5).unwrap();
        assert!(ortho_residual_detailed(&spec, 0, 0, 400, 1e-11).unwrap().residual <= 1e-11);
    }

    #[test]
    fn even_odd_cross_term_cancels_over_both_branches() {
        let spec = OrthoSpec::new(RelationId::DiscreteQUltraFull, Params::a(0.8), 0.5).unwrap();
        assert!(ortho_residual(&spec, 0, 1, 400).unwrap() <= 1e-12);
    }

    #[test]
    fn dual_alt_q_charlier_diagonal_two() {
        let spec = OrthoSpec::new(RelationId::DualAltQCharlier, Params::a(1.0), 0.5).unwrap();
        assert!(ortho_residual(&spec, 2, 2, 120).unwrap() <= 1e-10);
    }

    #[test]
    fn perturbed_weights_are_detected() {
        for r in RelationId::ALL {
            let spec = OrthoSpec::new(r, r.default_params(), 0.5).unwrap();
            for pert in [Perturbation::ConstantExponent, Perturbation::IndexExponent] {
                let bad = spec.perturbed(pert);
                let rep = relation_report(&bad, 3, 400, 1e-9).unwrap();
                assert!(rep.residual > 1e-3, "{r} {pert:?}: {}", rep.residual);
            }
        }
    }

    #[test]
    fn foreign_branch_is_rejected() {
        let spec = OrthoSpec::new(RelationId::LittleQJacobi, Params::ab(0.2, 0.1), 0.5).unwrap();
        assert!(matches!(spec.weight(0, Branch::C), Err(QError::InvalidBranch(_))));
    }

    #[test]
    fn too_short_truncation_is_reported() {
        let spec = OrthoSpec::new(RelationId::LittleQLaguerre, Params::a(0.5), 0.5).unwrap();
        assert!(matches!(ortho_residual(&spec, 2, 2, 5), Err(QError::TailNotBounded { .. })));
    }
}
