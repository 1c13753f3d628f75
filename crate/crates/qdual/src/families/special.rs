use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FamilyId, Params};
use crate::error::{QError, Result};
use crate::qkernel::qpoch;

/// Tabulated points with closed-form polynomial values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialPoint {
    /// `x = 1`.
    One,
    /// `x = a` (Al-Salam-Carlitz I).
    A,
    /// `x = aq`.
    AQ,
    /// `x = bq` (big q-Laguerre).
    BQ,
    /// `x = cq` (big q-Jacobi).
    CQ,
}

impl SpecialPoint {
    pub fn x(self, p: &Params, q: f64) -> f64 {
        match self {
            SpecialPoint::One => 1.0,
            SpecialPoint::A => p.a,
            SpecialPoint::AQ => p.a * q,
            SpecialPoint::BQ => p.b * q,
            SpecialPoint::CQ => p.c * q,
        }
    }
}

impl fmt::Display for SpecialPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpecialPoint::One => "1",
            SpecialPoint::A => "a",
            SpecialPoint::AQ => "aq",
            SpecialPoint::BQ => "bq",
            SpecialPoint::CQ => "cq",
        };
        f.write_str(s)
    }
}

/// Closed-form value of the degree-`n` polynomial at a tabulated point.
pub fn special_value(fid: FamilyId, p: &Params, n: usize, point: SpecialPoint, q: f64) -> Result<f64> {
    use FamilyId::*;
    use SpecialPoint::*;
    fid.validate(p, q)?;
    let ni = n as i32;
    let tri_up = q.powf((n * (n + 1)) as f64 / 2.0);
    let tri_down = q.powf((n * n.saturating_sub(1)) as f64 / 2.0);
    let (a, b, c) = (p.a, p.b, p.c);
    let v = match (fid, point) {
        (LittleQJacobi, One) => qpoch(b * q, q, n) / qpoch(a * q, q, n) * (-a).powi(ni) * tri_up,
        (BigQJacobi, AQ) => qpoch(a * b * q / c, q, n) / qpoch(c * q, q, n) * (-c).powi(ni) * tri_up,
        (BigQJacobi, CQ) => qpoch(b * q, q, n) / qpoch(a * q, q, n) * (-a).powi(ni) * tri_up,
        (BigQLaguerre, AQ) => (-b * q).powi(ni) * tri_down / qpoch(b * q, q, n),
        (BigQLaguerre, BQ) => (-a * q).powi(ni) * tri_down / qpoch(a * q, q, n),
        (AltQCharlier, One) => (-a).powi(ni) * q.powi(ni * ni),
        (AlSalamCarlitzI, One) => (-a).powi(ni) * tri_down,
        (AlSalamCarlitzI, A) => (-1f64).powi(ni) * tri_down,
        (LittleQLaguerre, One) => (-a * q).powi(ni) * tri_down / qpoch(a * q, q, n),
        _ => return Err(QError::UnknownPoint(format!("{point} for {fid}"))),
    };
    Ok(v)
}

/// Special points tabulated for a family.
pub fn special_points(fid: FamilyId) -> &'static [SpecialPoint] {
    use FamilyId::*;
    use SpecialPoint::*;
    match fid {
        LittleQJacobi | AltQCharlier | LittleQLaguerre => &[One],
        BigQJacobi => &[AQ, CQ],
        BigQLaguerre => &[AQ, BQ],
        AlSalamCarlitzI => &[One, A],
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        let v = special_value(FamilyId::AltQCharlier, &Params::a(1.0), 2, SpecialPoint::One, 0.5).unwrap();
        assert!((v - 0.0625).abs() < 1e-15);
        let v = special_value(FamilyId::AlSalamCarlitzI, &Params::a(-1.0), 3, SpecialPoint::A, 0.5).unwrap();
        assert!((v + 0.125).abs() < 1e-15);
    }

    #[test]
    fn little_laguerre_at_one_is_negative() {
        // the tabulated value carries (-aq)^n
        let v = special_value(FamilyId::LittleQLaguerre, &Params::a(0.5), 1, SpecialPoint::One, 0.5).unwrap();
        assert!((v + 0.25 / 0.75).abs() < 1e-15);
    }

    #[test]
    fn unknown_point() {
        let e = special_value(FamilyId::QCharlier, &Params::a(1.0), 1, SpecialPoint::One, 0.5);
        assert!(matches!(e, Err(QError::UnknownPoint(_))));
    }
}
