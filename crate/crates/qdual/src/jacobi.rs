//! Symmetric Jacobi operators of six primal families, their truncations,
//! spectra and Hilbert-Schmidt sums.
//!
//! Entries come from the normalized recurrences in [`crate::families`]: for
//! `x p_n = A_n p_{n+1} + B_n p_n + C_n p_{n-1}` the symmetric operator has
//! diagonal `B_n` and off-diagonal `±sqrt(A_n C_{n+1})`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::families::{rec_coeffs, FamilyId, Params};

const BISECTION_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorTag {
    /// Little q-Jacobi.
    I1,
    /// Big q-Jacobi.
    I2,
    /// Big q-Laguerre.
    A,
    /// Alternative q-Charlier.
    B1,
    /// Al-Salam-Carlitz I.
    B2,
    /// Little q-Laguerre.
    B3,
}

impl OperatorTag {
    pub const ALL: [OperatorTag; 6] =
        [OperatorTag::I1, OperatorTag::I2, OperatorTag::A, OperatorTag::B1, OperatorTag::B2, OperatorTag::B3];

    pub fn family(self) -> FamilyId {
        match self {
            OperatorTag::I1 => FamilyId::LittleQJacobi,
            OperatorTag::I2 => FamilyId::BigQJacobi,
            OperatorTag::A => FamilyId::BigQLaguerre,
            OperatorTag::B1 => FamilyId::AltQCharlier,
            OperatorTag::B2 => FamilyId::AlSalamCarlitzI,
            OperatorTag::B3 => FamilyId::LittleQLaguerre,
        }
    }

    /// Sign of the off-diagonal entries in the printed operator.
    fn offdiag_sign(self) -> f64 {
        match self {
            OperatorTag::I1 | OperatorTag::B1 | OperatorTag::B3 => -1.0,
            _ => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorTag::I1 => "I1",
            OperatorTag::I2 => "I2",
            OperatorTag::A => "A",
            OperatorTag::B1 => "B1",
            OperatorTag::B2 => "B2",
            OperatorTag::B3 => "B3",
        }
    }

    /// In-domain parameter point used by the default check grids.
    pub fn default_params(self) -> Params {
        match self {
            OperatorTag::I1 => Params::ab(0.2, 0.1),
            OperatorTag::I2 => Params::abc(0.2, 0.1, -0.3),
            OperatorTag::A => Params::ab(0.5, -0.4),
            OperatorTag::B1 => Params::a(1.0),
            OperatorTag::B2 => Params::a(-0.6),
            OperatorTag::B3 => Params::a(0.5),
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorTag {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        OperatorTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| QError::InvalidInput(format!("unknown operator '{s}'")))
    }
}

/// Operator tag together with its parameter point and base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorKind {
    pub tag: OperatorTag,
    pub params: Params,
    pub q: f64,
}

impl OperatorKind {
    pub fn new(tag: OperatorTag, params: Params, q: f64) -> Result<Self> {
        tag.family().validate(&params, q)?;
        Ok(Self { tag, params, q })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagonalOperator {
    pub kind: OperatorKind,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Largest absolute row sum, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let r = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
                self.diag[i].abs() + l + r
            })
            .fold(0.0, f64::max)
    }
}

/// Positive off-diagonal magnitude `a_n` and diagonal `b_n`.
pub fn coeffs(kind: &OperatorKind, n: usize) -> Result<(f64, f64)> {
    let fid = kind.tag.family();
    let r0 = rec_coeffs(fid, &kind.params, n, kind.q)?;
    let r1 = rec_coeffs(fid, &kind.params, n + 1, kind.q)?;
    let radicand = r0.a * r1.c;
    if !(radicand > 0.0) {
        return Err(QError::NegativeRadicand { index: n, value: radicand });
    }
    Ok((radicand.sqrt(), r0.b))
}

/// `size x size` principal truncation.
pub fn build(kind: &OperatorKind, size: usize) -> Result<TridiagonalOperator> {
    if size == 0 {
        return Err(QError::InvalidInput("operator size must be positive".into()));
    }
    let sign = kind.tag.offdiag_sign();
    let mut diag = Vec::with_capacity(size);
    let mut offdiag = Vec::with_capacity(size.saturating_sub(1));
    for n in 0..size {
        let (a, b) = coeffs(kind, n)?;
        diag.push(b);
        if n + 1 < size {
            offdiag.push(sign * a);
        }
    }
    Ok(TridiagonalOperator { kind: *kind, diag, offdiag })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HsSum {
    /// `sum (2 a_n^2 + b_n^2)`.
    pub squares: f64,
    /// `sum (2 |a_n| + |b_n|)`.
    pub absolute: f64,
    /// Relative contribution of the last term to each sum.
    pub last_increment_squares: f64,
    pub last_increment_absolute: f64,
}

pub fn hs_sum(kind: &OperatorKind, size: usize) -> Result<HsSum> {
    let mut sq = 0.0;
    let mut ab = 0.0;
    let (mut dsq, mut dab) = (0.0, 0.0);
    for n in 0..size {
        let (a, b) = coeffs(kind, n)?;
        dsq = 2.0 * a * a + b * b;
        dab = 2.0 * a.abs() + b.abs();
        sq += dsq;
        ab += dab;
    }
    Ok(HsSum {
        squares: sq,
        absolute: ab,
        last_increment_squares: if sq > 0.0 { dsq / sq } else { 0.0 },
        last_increment_absolute: if ab > 0.0 { dab / ab } else { 0.0 },
    })
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d.abs() < pivmin {
        d = -pivmin;
    }
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let e = offdiag[i - 1];
        d = diag[i] - x - e * e / d;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Magnitude rounded to 10 significant digits, so that `±λ` pairs tie.
fn magnitude_key(x: f64) -> f64 {
    format!("{:.10e}", x.abs()).parse().unwrap_or(x.abs())
}

fn by_magnitude(a: &f64, b: &f64) -> std::cmp::Ordering {
    magnitude_key(*b).total_cmp(&magnitude_key(*a)).then(b.total_cmp(a))
}

/// All eigenvalues by Sturm bisection, sorted by decreasing magnitude
/// (ties: positive first).
pub fn eig(op: &TridiagonalOperator) -> Result<Vec<f64>> {
    eig_raw(&op.diag, &op.offdiag)
}

pub fn eig_raw(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if offdiag.len() + 1 != n {
        return Err(QError::InvalidInput("off-diagonal length must be size - 1".into()));
    }
    if n == 1 {
        return Ok(vec![diag[0]]);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { offdiag[i - 1].abs() } else { 0.0 } + if i + 1 < n { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let norm = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(norm * 1e-300);
    let floor = f64::EPSILON * norm;
    lo -= floor;
    hi += floor;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // k-th smallest eigenvalue: the smallest x with count(x) > k
        let (mut a, mut b) = (lo, hi);
        let mut converged = false;
        for _ in 0..BISECTION_CAP {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, offdiag, mid, pivmin) > k {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) + floor * 1e-6 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(QError::NoConvergence { index: k });
        }
        out.push(0.5 * (a + b));
    }
    out.sort_by(by_magnitude);
    Ok(out)
}

/// Predicted spectrum points, largest magnitude first.
pub fn predicted_spectrum(kind: &OperatorKind, count: usize) -> Vec<f64> {
    let q = kind.q;
    let p = &kind.params;
    let geo = |scale: f64, shift: i32| (0..count).map(move |n| scale * q.powi(n as i32 + shift));
    let mut pts: Vec<f64> = match kind.tag {
        OperatorTag::I1 | OperatorTag::B1 | OperatorTag::B3 => geo(1.0, 0).collect(),
        OperatorTag::I2 => geo(p.a, 1).chain(geo(p.c, 1)).collect(),
        OperatorTag::A => geo(p.a, 1).chain(geo(p.b, 1)).collect(),
        OperatorTag::B2 => geo(1.0, 0).chain(geo(p.a, 0)).collect(),
    };
    pts.sort_by(by_magnitude);
    pts.truncate(count);
    pts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub kind: OperatorTag,
    pub params: Params,
    pub q: f64,
    #[serde(rename = "N")]
    pub size: usize,
    pub count: usize,
    pub pairs: Vec<(f64, f64)>,
    pub max_abs_err: f64,
    #[serde(skip)]
    pub computed: Vec<f64>,
    #[serde(skip)]
    pub predicted: Vec<f64>,
}

/// Pairs the `count` largest computed eigenvalues with the predicted points.
pub fn spectrum_match(kind: &OperatorKind, size: usize, count: usize) -> Result<SpectrumReport> {
    if count == 0 || 4 * count > size {
        return Err(QError::InvalidInput(format!(
            "count must satisfy 1 <= count <= N/4, got count = {count}, N = {size}"
        )));
    }
    let op = build(kind, size)?;
    let mut computed = eig(&op)?;
    computed.truncate(count);
    let predicted = predicted_spectrum(kind, count);
    let pairs: Vec<(f64, f64)> = computed.iter().copied().zip(predicted.iter().copied()).collect();
    let max_abs_err = pairs.iter().map(|(c, p)| (c - p).abs()).fold(0.0, f64::max);
    Ok(SpectrumReport {
        kind: kind.tag,
        params: kind.params,
        q: kind.q,
        size,
        count,
        pairs,
        max_abs_err,
        computed,
        predicted,
    })
}
