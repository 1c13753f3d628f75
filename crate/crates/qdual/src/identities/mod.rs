//! Closed registry of summation formulas, transformations, generating
//! functions and cross-orthogonality sums, each evaluated as a residual
//! between two independently computed sides.

mod evaluators;
mod exact;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qkernel::QContext;

/// Named real parameters of one identity instance.
pub type ParamMap = BTreeMap<String, f64>;

/// Default pass threshold for identity residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

macro_rules! identities {
    ($( $variant:ident => $slug:literal, $group:literal, $label:literal, [$( ($p:literal, $v:expr) ),* $(,)?] ; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum IdentityId { $( $variant, )* }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[ $( IdentityId::$variant, )* ];

            pub fn slug(self) -> &'static str {
                match self { $( IdentityId::$variant => $slug, )* }
            }

            /// Topic used to filter the registry.
            pub fn group(self) -> &'static str {
                match self { $( IdentityId::$variant => $group, )* }
            }

            /// Descriptive label of the identity.
            pub fn citation(self) -> &'static str {
                match self { $( IdentityId::$variant => $label, )* }
            }

            /// Parameter names with their default values.
            pub fn schema(self) -> &'static [(&'static str, f64)] {
                match self { $( IdentityId::$variant => &[ $( ($p, $v) ),* ], )* }
            }
        }
    };
}

identities! {
    LittleQJacobiWeightSum => "little-q-jacobi-weight-sum", "summation",
        "sum of the dual little q-Jacobi weights equals (abq^2;q)_inf/(aq;q)_inf",
        [("a", 0.3), ("b", 0.4)];
    SplitFactorRatio => "split-factor-ratio", "summation",
        "(aq,-aq;q)_n/(a,-a;q)_n = (1-a^2 q^2n)/(1-a^2)",
        [("a", 0.3), ("n", 2.0)];
    JacksonSum => "jackson-sum", "summation",
        "Jackson's very-well-poised 6phi5 summation, nonterminating",
        [("a", 0.3), ("b", 0.6), ("c", 2.0), ("d", 3.0)];
    JacksonSumTerminating => "jackson-sum-terminating", "summation",
        "Jackson's very-well-poised 6phi5 summation with b = q^-n",
        [("a", 0.3), ("c", 0.7), ("d", 1.9), ("n", 5.0)];
    JacksonLimitTwoInfinite => "jackson-limit-two-infinite", "summation",
        "limit of the 6phi5 summation as c, d tend to infinity",
        [("a", 0.3), ("b", 0.6)];
    DualBigQJacobiWeightSum => "dual-big-q-jacobi-weight-sum", "summation",
        "sum of the dual big q-Jacobi weights",
        [("a", 0.3), ("b", 0.4), ("c", -0.5)];
    DualBigQJacobiSwappedWeightSum => "dual-big-q-jacobi-swapped-weight-sum", "summation",
        "sum of the dual big q-Jacobi weights with the roles of (a, c) and (b, abq/c) exchanged",
        [("a", 0.3), ("b", 0.4), ("c", -0.5)];
    JacksonLimitOneInfinite => "jackson-limit-one-infinite", "summation",
        "limit of the 6phi5 summation as d tends to infinity",
        [("a", 0.3), ("b", 0.6), ("c", 2.5)];
    EtaMoments => "eta-moments", "summation",
        "eta_k(a;q) = sum_n (-1)^n q^(n(n-1)/2) (1-aq^(2n+1))/(1-aq) (aq;q)_n/(q;q)_n mu(n)^k vanishes",
        [("a", 0.4), ("k", 0.0)];
    TripleProductLimit => "triple-product-limit", "summation",
        "limiting form of Jacobi's triple product: sum a^n q^(n^2)/(aq,q;q)_n = 1/(aq;q)_inf",
        [("a", 0.3)];
    QBinomial => "q-binomial", "summation",
        "q-binomial theorem: sum (bq;q)_n (aq)^n/(q;q)_n = (abq^2;q)_inf/(aq;q)_inf",
        [("a", 0.2), ("b", 0.1)];
    SearsTwoTerm => "sears-two-term", "transformation",
        "two-term 2phi1 relation with A = aq, B = abq/c, C = aq/c",
        [("a", 0.3), ("b", 0.4), ("c", -0.5)];
    SearsThreeTerm => "sears-three-term", "transformation",
        "Sears' three-term relation for the big q-Laguerre weights",
        [("a", 0.4), ("b", -0.3)];
    SearsAlSalamCarlitz => "sears-al-salam-carlitz", "transformation",
        "two-term relation summing the Al-Salam-Carlitz I weights on both branches to one",
        [("a", -0.6)];
    SinghQuadratic => "singh-quadratic", "transformation",
        "Singh's quadratic transformation with a^2 = q^-2k",
        [("k", 2.0), ("b2", 0.2), ("c", 0.3)];
    SinghQuadraticExtended => "singh-quadratic-extended", "transformation",
        "extension of Singh's quadratic transformation to a^2 = q^(-2k-1)",
        [("k", 2.0), ("a", 0.8), ("x", 0.37)];
    DiscreteQUltraEvenForm => "discrete-q-ultraspherical-even-form", "discrete-q-ultraspherical",
        "even discrete q-ultraspherical polynomials as little q-Jacobi in base q^2",
        [("a", 0.8), ("k", 2.0), ("x", 0.37)];
    DiscreteQUltraOddForm => "discrete-q-ultraspherical-odd-form", "discrete-q-ultraspherical",
        "odd discrete q-ultraspherical polynomials as x times little q-Jacobi in base q^2",
        [("a", 0.8), ("k", 2.0), ("x", 0.37)];
    DualDiscreteQUltraEvenForm => "dual-discrete-q-ultraspherical-even-form", "discrete-q-ultraspherical",
        "dual discrete q-ultraspherical on mu(2k) as a 3phi1 in base q^2 (tilde = 1 for the minus lattice)",
        [("a", 0.8), ("n", 3.0), ("k", 2.0), ("tilde", 0.0)];
    DualDiscreteQUltraOddForm => "dual-discrete-q-ultraspherical-odd-form", "discrete-q-ultraspherical",
        "dual discrete q-ultraspherical on mu(2k+1) as q^n times a 3phi1 in base q^2 (tilde = 1 for the minus lattice)",
        [("a", 0.8), ("n", 3.0), ("k", 2.0), ("tilde", 0.0)];
    QuadraticReductionEven => "quadratic-reduction-even", "discrete-q-ultraspherical",
        "3phi2 in base q with denominators +-iaq equals a 3phi1 in base q^2, even lattice",
        [("a2", 0.6), ("k", 2.0), ("n", 3.0), ("c", 1.0)];
    QuadraticReductionOdd => "quadratic-reduction-odd", "discrete-q-ultraspherical",
        "3phi2 in base q with denominators +-iaq equals q^n times a 3phi1 in base q^2, odd lattice",
        [("a2", 0.6), ("k", 2.0), ("n", 3.0), ("c", 1.0)];
    QuadraticReductionShifted => "quadratic-reduction-shifted", "discrete-q-ultraspherical",
        "even quadratic reduction with q^-2k, -a^2 q^(2k+1) replaced by q^-2k/c, -c a^2 q^(2k+1)",
        [("a2", 0.6), ("k", 2.0), ("n", 3.0), ("c", 0.7)];
    GenDualBigQJacobiAq => "gen-dual-big-q-jacobi-aq", "generating-function",
        "generating function sum (aq;q)_n t^n D_n / (q;q)_n as a 2phi2",
        [("a", 0.3), ("b", 0.4), ("c", -0.5), ("x", 1.0), ("t", 0.4)];
    GenDualBigQJacobiAqAlt => "gen-dual-big-q-jacobi-aq-alt", "generating-function",
        "generating function sum (aq;q)_n t^n D_n / (q;q)_n as a terminating 2phi1",
        [("a", 0.3), ("b", 0.4), ("c", -0.5), ("x", 1.0), ("t", 0.4)];
    GenDualBigQJacobiAbqc => "gen-dual-big-q-jacobi-abq-c", "generating-function",
        "generating function sum (abq/c;q)_n t^n D_n / (q;q)_n",
        [("a", 0.3), ("b", 0.4), ("c", -0.5), ("x", 1.0), ("t", 0.4)];
    GenDualLittleQJacobi => "gen-dual-little-q-jacobi", "generating-function",
        "generating function sum (bq;q)_n (at)^n d_n / (q;q)_n as a ratio of infinite products",
        [("a", 0.3), ("b", 0.4), ("x", 1.0), ("t", 0.4)];
    JacksonTransformation => "jackson-transformation", "transformation",
        "Jackson's transformation 2phi1(A,B;C;z) = (Az;q)_inf/(z;q)_inf 2phi2(A,C/B;C,Az;Bz)",
        [("A", 0.3), ("B", 0.6), ("C", 0.45), ("z", 0.35)];
    GenBigQLaguerre => "gen-big-q-laguerre", "generating-function",
        "generating function of the big q-Laguerre polynomials on the a-branch lattice",
        [("a", 0.4), ("b", -0.3), ("s", 1.0), ("t", 0.1)];
    GenLittleQLaguerreProduct => "gen-little-q-laguerre-product", "generating-function",
        "generating function of the little q-Laguerre polynomials as (aqt;q)_inf 2phi0, on x = q^s",
        [("a", 0.5), ("s", 1.0), ("t", 0.4)];
    GenLittleQLaguerreFormal => "gen-little-q-laguerre-formal", "generating-function",
        "generating function of the little q-Laguerre polynomials with a 2phi1(0,0;q/t;q,qx) factor, as a formal power series in t truncated at the given order",
        [("a", 0.5), ("x", 0.37), ("t", 0.3), ("order", 6.0)];
    GenAlSalamCarlitzII => "gen-al-salam-carlitz-2", "generating-function",
        "generating function of the Al-Salam-Carlitz II polynomials on q^-x",
        [("a", 0.5), ("x", 2.0), ("t", 0.4)];
    AlSalamChiharaLink => "al-salam-chihara-link", "reduction",
        "dual little q-Jacobi with a = beta/alpha, b = 1/(alpha beta q) as Al-Salam-Chihara in base 1/q",
        [("alpha", 1.7), ("beta", 0.9), ("n", 3.0), ("m", 4.0)];
    QMeixnerInverseBase => "q-meixner-inverse-base", "reduction",
        "q-Meixner in base 1/q as a big q-Laguerre polynomial in base q",
        [("b", 0.6), ("c", 0.35), ("n", 2.0), ("x", 0.3)];
    DualLittleQJacobiBZero => "dual-little-q-jacobi-b-zero", "reduction",
        "dual little q-Jacobi with b = 0 read as a 2phi0, equal to scaled Al-Salam-Carlitz II",
        [("a", 0.3), ("n", 3.0), ("x", 2.0)];
    DualBigQJacobiSymmetry => "dual-big-q-jacobi-symmetry", "reduction",
        "D_n(mu(m);a,b,c) = D_n(mu(m);ab/c,c,b)",
        [("a", 0.3), ("b", 0.4), ("c", -0.5), ("n", 3.0), ("m", 2.0)];
    DualBigQJacobiCross => "dual-big-q-jacobi-cross", "cross-orthogonality",
        "alternating sum of D_n(mu(m);a,b,c) D_n'(mu(m);b,a,ab/c) vanishes",
        [("a", 0.3), ("b", 0.4), ("c", -0.5), ("n", 1.0), ("n2", 2.0)];
    QCharlierCross => "q-charlier-cross", "cross-orthogonality",
        "alternating sum of q-Charlier polynomials with parameters -a and -1/a vanishes",
        [("a", -0.6), ("n", 2.0), ("n2", 3.0)];
    QMeixnerCross => "q-meixner-cross", "cross-orthogonality",
        "alternating sum of q-Meixner polynomials M_n(;a,-b/a) M_n'(;b,-a/b) vanishes",
        [("a", 0.4), ("b", -0.3), ("n", 2.0), ("n2", 3.0)];
    BilateralTildeOrthogonality => "bilateral-tilde-orthogonality", "discrete-q-ultraspherical",
        "bilateral orthogonality of the imaginary-argument dual q-ultraspherical polynomials on a d-shifted lattice",
        [("a", 1.0), ("d", 0.7), ("r", 2.0), ("s", 2.0)];
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for IdentityId {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|i| i.slug() == s)
            .ok_or_else(|| QError::InvalidInput(format!("unknown identity '{s}'")))
    }
}

/// One evaluated identity instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub id: IdentityId,
    pub citation: &'static str,
    pub params: ParamMap,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(1, |rhs|)`.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Registry row: identifier, label and parameter defaults.
#[derive(Debug, Clone, Serialize)]
pub struct RegistryEntry {
    pub id: IdentityId,
    pub slug: &'static str,
    pub group: &'static str,
    pub citation: &'static str,
    pub params: &'static [(&'static str, f64)],
}

/// The full registry, optionally restricted to one group.
pub fn registry_list(group: Option<&str>) -> Vec<RegistryEntry> {
    IdentityId::ALL
        .iter()
        .filter(|id| group.is_none_or(|g| id.group() == g))
        .map(|&id| RegistryEntry { id, slug: id.slug(), group: id.group(), citation: id.citation(), params: id.schema() })
        .collect()
}

/// Defaults of `id` overridden by `params`; unknown names are rejected.
pub fn resolve_params(id: IdentityId, params: &ParamMap) -> Result<ParamMap> {
    let mut out: ParamMap = id.schema().iter().map(|&(k, v)| (k.to_string(), v)).collect();
    for (k, &v) in params {
        match out.get_mut(k) {
            Some(slot) => *slot = v,
            None => {
                return Err(QError::InvalidInput(format!("identity {id} has no parameter '{k}'")));
            }
        }
    }
    Ok(out)
}

pub fn residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / rhs.abs().max(1.0)
}

/// Evaluates both sides of `id` at `params` (defaults fill the gaps).
pub fn check(id: IdentityId, params: &ParamMap, ctx: &QContext) -> Result<IdentityCheck> {
    check_with_tolerance(id, params, ctx, DEFAULT_TOLERANCE)
}

pub fn check_with_tolerance(id: IdentityId, params: &ParamMap, ctx: &QContext, tolerance: f64) -> Result<IdentityCheck> {
    let params = resolve_params(id, params)?;
    let (lhs, rhs) = evaluators::evaluate(id, &params, ctx)?;
    let r = residual(lhs, rhs);
    Ok(IdentityCheck {
        id,
        citation: id.citation(),
        params,
        q: ctx.q(),
        lhs,
        rhs,
        residual: r,
        tolerance,
        pass: r <= tolerance,
    })
}

/// One grid point of a sweep; failures are kept rather than aborting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub params: ParamMap,
    pub outcome: std::result::Result<IdentityCheck, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub id: IdentityId,
    pub points: Vec<SweepPoint>,
    /// Largest residual among the points that evaluated; infinite if any failed.
    pub max_residual: f64,
    pub pass: bool,
}

pub fn sweep(id: IdentityId, grid: &[ParamMap], ctx: &QContext) -> SweepReport {
    let mut max_residual: f64 = 0.0;
    let points: Vec<SweepPoint> = grid
        .iter()
        .map(|p| {
            let outcome = check(id, p, ctx).map_err(|e| e.to_string());
            match &outcome {
                Ok(c) => max_residual = max_residual.max(c.residual),
                Err(_) => max_residual = f64::INFINITY,
            }
            SweepPoint { params: p.clone(), outcome }
        })
        .collect();
    let pass = points.iter().all(|p| p.outcome.as_ref().is_ok_and(|c| c.pass));
    SweepReport { id, points, max_residual, pass }
}

fn point(pairs: &[(&str, f64)]) -> ParamMap {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Default parameter grid used by sweeps and the acceptance run.
pub fn default_grid(id: IdentityId) -> Vec<ParamMap> {
    use IdentityId::*;
    let ints = |name: &'static str, range: std::ops::RangeInclusive<i32>| -> Vec<ParamMap> {
        range.map(|v| point(&[(name, v as f64)])).collect()
    };
    match id {
        SplitFactorRatio => ints("n", 0..=5),
        JacksonSumTerminating => ints("n", 0..=6),
        EtaMoments => ints("k", 0..=6),
        SinghQuadratic => (1..=3).flat_map(|k| [0.2, 0.7].map(|b2| point(&[("k", k as f64), ("b2", b2)]))).collect(),
        SinghQuadraticExtended => (0..=3).flat_map(|k| [0.37, -0.6].map(|x| point(&[("k", k as f64), ("x", x)]))).collect(),
        DiscreteQUltraEvenForm | DiscreteQUltraOddForm => {
            (0..=3).flat_map(|k| [0.37, 1.1].map(|x| point(&[("k", k as f64), ("x", x)]))).collect()
        }
        DualDiscreteQUltraEvenForm | DualDiscreteQUltraOddForm => (0..=3)
            .flat_map(|n| {
                [0.0, 1.0].into_iter().flat_map(move |tilde| {
                    (0..=2).map(move |k| point(&[("n", n as f64), ("k", k as f64), ("tilde", tilde)]))
                })
            })
            .collect(),
        QuadraticReductionEven | QuadraticReductionOdd => (0..=2)
            .flat_map(|k| {
                [0.0, 1.0, 3.0]
                    .into_iter()
                    .flat_map(move |n| [1.0, 0.7, 1.3].map(|c| point(&[("k", k as f64), ("n", n), ("c", c)])))
            })
            .collect(),
        QuadraticReductionShifted => [0.7, 1.3, 0.37, 2.2]
            .into_iter()
            .flat_map(|c| (0..=2).map(move |k| point(&[("c", c), ("k", k as f64)])))
            .collect(),
        GenDualLittleQJacobi => [0.1, 0.2, 0.3, 0.4, 0.5].map(|t| point(&[("t", t)])).to_vec(),
        GenDualBigQJacobiAq | GenDualBigQJacobiAqAlt | GenDualBigQJacobiAbqc => [0.0, 1.0, 3.0]
            .into_iter()
            .flat_map(|x| [0.1, 0.3, 0.5].map(|t| point(&[("x", x), ("t", t)])))
            .collect(),
        GenBigQLaguerre => (0..=3).map(|s| point(&[("s", s as f64)])).collect(),
        GenLittleQLaguerreProduct => (0..=3).map(|s| point(&[("s", s as f64)])).collect(),
        GenLittleQLaguerreFormal => [0.37, -0.8, 1.3].map(|x| point(&[("x", x)])).to_vec(),
        GenAlSalamCarlitzII => (0..=3).map(|x| point(&[("x", x as f64)])).collect(),
        AlSalamChiharaLink => {
            (1..=3).flat_map(|n| [0, 1, 4].map(|m| point(&[("n", n as f64), ("m", m as f64)]))).collect()
        }
        QMeixnerInverseBase => (1..=4).flat_map(|n| [0.3, 2.1].map(|x| point(&[("n", n as f64), ("x", x)]))).collect(),
        DualLittleQJacobiBZero => (0..=4).flat_map(|n| [0, 2].map(|x| point(&[("n", n as f64), ("x", x as f64)]))).collect(),
        DualBigQJacobiSymmetry => (0..10).map(|i| point(&[("n", (i % 5) as f64), ("m", (i / 2) as f64)])).collect(),
        DualBigQJacobiCross | QCharlierCross | QMeixnerCross => {
            [(0, 0), (1, 0), (1, 2), (3, 3)].map(|(n, n2)| point(&[("n", n as f64), ("n2", n2 as f64)])).to_vec()
        }
        BilateralTildeOrthogonality => (0..=4)
            .flat_map(|r| (r..=4).flat_map(move |s| [0.5, 0.7].map(|d| point(&[("r", r as f64), ("s", s as f64), ("d", d)]))))
            .collect(),
        _ => vec![ParamMap::new()],
    }
}
