use serde::{Deserialize, Serialize};

use super::FamilyId;

/// Relative margin used to reject parameters sitting on a domain boundary.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

/// Parameter record shared by all families; each family reads the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t1: f64,
    pub t2: f64,
    pub d: f64,
}

impl Params {
    pub fn a(a: f64) -> Self {
        Self { a, ..Self::default() }
    }

    pub fn ab(a: f64, b: f64) -> Self {
        Self { a, b, ..Self::default() }
    }

    pub fn abc(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c, ..Self::default() }
    }

    pub fn bilateral(t1: f64, t2: f64, d: f64) -> Self {
        Self { t1, t2, d, ..Self::default() }
    }
}

fn below(x: f64, bound: f64) -> bool {
    x < bound * (1.0 - BOUNDARY_MARGIN)
}

fn pos(x: f64) -> bool {
    x > BOUNDARY_MARGIN
}

/// Returns one message per violated constraint; empty means valid.
pub fn validate_params(fid: FamilyId, p: &Params, q: f64) -> Vec<String> {
    use FamilyId::*;
    let mut v = Vec::new();
    if !(q > 0.0 && q < 1.0) {
        v.push(format!("base q must lie in (0,1), got {q}"));
        return v;
    }
    let qi = 1.0 / q;
    match fid {
        LittleQJacobi | DualLittleQJacobi => {
            if !(pos(p.a) && below(p.a, qi)) {
                v.push(format!("a must satisfy 0 < a < 1/q, got a = {}", p.a));
            }
            if !below(p.b, qi) {
                v.push(format!("b must satisfy b < 1/q, got b = {}", p.b));
            }
        }
        BigQJacobi | DualBigQJacobi => {
            if !(pos(p.a) && below(p.a, qi)) {
                v.push(format!("a must satisfy 0 < a < 1/q, got a = {}", p.a));
            }
            if !(pos(p.b) && below(p.b, qi)) {
                v.push(format!("b must satisfy 0 < b < 1/q, got b = {}", p.b));
            }
            if !(p.c < -BOUNDARY_MARGIN) {
                v.push(format!("c must be negative, got c = {}", p.c));
            }
        }
        DiscreteQUltra | DualDiscreteQUltra => {
            if !(pos(p.a) && below(p.a, qi * qi)) {
                v.push(format!("a must satisfy 0 < a < 1/q^2, got a = {}", p.a));
            }
        }
        DiscreteQUltraTilde | DualDiscreteQUltraTilde | AltQCharlier | DualAltQCharlier => {
            if !pos(p.a) {
                v.push(format!("a must be positive, got a = {}", p.a));
            }
        }
        BigQLaguerre => {
            if !(pos(p.a) && below(p.a, qi)) {
                v.push(format!("a must satisfy 0 < a < 1/q, got a = {}", p.a));
            }
            if !(p.b < -BOUNDARY_MARGIN) {
                v.push(format!("b must be negative, got b = {}", p.b));
            }
        }
        QMeixner => {
            if !below(p.a, qi) || p.a == 0.0 {
                v.push(format!("a must be nonzero with a < 1/q, got a = {}", p.a));
            }
            if !pos(p.b) {
                v.push(format!("b must be positive, got b = {}", p.b));
            }
        }
        AlSalamCarlitzI => {
            if !(p.a < -BOUNDARY_MARGIN) {
                v.push(format!("a must be negative, got a = {}", p.a));
            }
        }
        QCharlier => {
            if !pos(p.a) {
                v.push(format!("a must be positive, got a = {}", p.a));
            }
        }
        LittleQLaguerre | AlSalamCarlitzII => {
            if !(pos(p.a) && below(p.a, qi)) {
                v.push(format!("a must satisfy 0 < a < 1/q, got a = {}", p.a));
            }
        }
        BilateralASC => {
            if !(p.t1 * p.t2 > 0.0) {
                v.push(format!("t1 t2 must be positive, got t1 = {}, t2 = {}", p.t1, p.t2));
            }
            if !(p.d >= q * (1.0 - BOUNDARY_MARGIN) && below(p.d, 1.0)) {
                v.push(format!("d must satisfy q <= d < 1, got d = {}", p.d));
            }
        }
    }
    if [p.a, p.b, p.c, p.t1, p.t2, p.d].iter().any(|x| !x.is_finite()) {
        v.push("parameters must be finite".into());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        assert!(validate_params(FamilyId::LittleQJacobi, &Params::ab(0.5, -3.0), 0.5).is_empty());
        let v = validate_params(FamilyId::BigQLaguerre, &Params::ab(0.5, 0.2), 0.5);
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("b must be negative"));
        assert!(validate_params(FamilyId::AltQCharlier, &Params::a(1.0), 0.5).is_empty());
    }

    #[test]
    fn boundary_is_rejected() {
        assert!(!validate_params(FamilyId::LittleQJacobi, &Params::ab(2.0, 0.1), 0.5).is_empty());
        assert!(!validate_params(FamilyId::BigQJacobi, &Params::abc(0.2, 0.1, 0.3), 0.5).is_empty());
        assert!(!validate_params(FamilyId::BilateralASC, &Params::bilateral(1.0, 1.0, 0.4), 0.5).is_empty());
        assert!(validate_params(FamilyId::BilateralASC, &Params::bilateral(1.0, 1.0, 0.5), 0.5).is_empty());
    }

    #[test]
    fn every_violation_is_listed() {
        let v = validate_params(FamilyId::BigQJacobi, &Params::abc(-1.0, 5.0, 1.0), 0.5);
        assert_eq!(v.len(), 3);
    }
}
