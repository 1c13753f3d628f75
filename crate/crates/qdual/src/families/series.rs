//! Defining terminating series of every family.
//!
//! Dual families take either a raw variable (`mu`, `q^{-x}` or the bilateral
//! `x`) or an integer lattice index; on the lattice the pair factors
//! `(q^{-m};q)_k (kappa q^{m+s};q)_k` are formed directly instead of through
//! `1 - mu q^j + kappa q^{2j+s}`, which avoids cancellation.
//!
//! Big q-Jacobi, big q-Laguerre and discrete q-ultraspherical polynomials are
//! also available through an equivalent transformed series (the `x` parameter
//! moved into a product `prod (x - a q^{j+1})`); the evaluator returns
//! whichever of the two has the smaller rounding estimate.

use super::{lattice, Branch, FamilyId, Params};
use crate::error::{QError, Result};
use crate::qkernel::{qpoch_ln, sum_by_ratio, sum_by_ratio_from, LogMag, QContext, SeriesSum};

/// Argument of an evaluation: a raw variable or a support point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    X(f64),
    Lattice { m: i64, branch: Branch },
}

#[derive(Debug, Clone, Copy)]
enum Var {
    Raw(f64),
    Lat(i64),
}

#[inline]
fn qp(q: f64, e: i64) -> f64 {
    q.powi(e as i32)
}

/// `1 - q^{k-n}`, the terminating factor.
#[inline]
fn term_factor(q: f64, k: usize, n: usize) -> f64 {
    1.0 - qp(q, k as i64 - n as i64)
}

/// Pair factor `(1 - q^{j-m})(1 - kappa q^{m+s+j})`, or its `mu` form.
fn pair(v: Var, kappa: f64, s: i64, q: f64, j: usize) -> f64 {
    let j = j as i64;
    match v {
        Var::Raw(mu) => 1.0 - mu * qp(q, j) + kappa * qp(q, 2 * j + s),
        Var::Lat(m) => (1.0 - qp(q, j - m)) * (1.0 - kappa * qp(q, m + s + j)),
    }
}

/// Single factor `1 - X q^j` with `X = q^{-m}` on the lattice.
fn single(v: Var, q: f64, j: usize) -> f64 {
    match v {
        Var::Raw(x) => 1.0 - x * qp(q, j as i64),
        Var::Lat(m) => 1.0 - qp(q, j as i64 - m),
    }
}

fn bilateral_pair(v: Var, p: &Params, q: f64, j: usize) -> f64 {
    let j = j as i64;
    match v {
        Var::Raw(x) => 1.0 - 2.0 * x * qp(q, j + 1) / p.t1 - qp(q, 2 * j + 2) / (p.t1 * p.t1),
        Var::Lat(m) => (1.0 - qp(q, j + 1 - m) / (p.d * p.t1)) * (1.0 + p.d * qp(q, m + j + 1) / p.t1),
    }
}

fn better(a: SeriesSum, b: SeriesSum) -> SeriesSum {
    if b.relative_error() < a.relative_error() {
        b
    } else {
        a
    }
}

fn gauss(q: f64, e2: i64) -> LogMag {
    // q^{e2/2}
    LogMag::from_parts(1.0, 0.5 * e2 as f64 * q.ln())
}

pub(crate) fn lqj(n: usize, x: f64, a: f64, b: f64, q: f64) -> SeriesSum {
    let ab = a * b;
    sum_by_ratio(
        |k| {
            term_factor(q, k, n) * (1.0 - ab * qp(q, (n + 1 + k) as i64))
                / ((1.0 - a * qp(q, k as i64 + 1)) * (1.0 - qp(q, k as i64 + 1)))
                * q
                * x
        },
        n,
    )
}

fn dlqj(n: usize, v: Var, a: f64, b: f64, q: f64) -> SeriesSum {
    let z = qp(q, n as i64) / a;
    sum_by_ratio(
        |k| {
            pair(v, a * b, 1, q, k) * term_factor(q, k, n)
                / ((1.0 - b * qp(q, k as i64 + 1)) * (1.0 - qp(q, k as i64 + 1)))
                * z
                * -qp(q, -(k as i64))
        },
        n,
    )
}

fn bqj_direct(n: usize, x: f64, a: f64, b: f64, c: f64, q: f64) -> SeriesSum {
    let ab = a * b;
    sum_by_ratio(
        |k| {
            let qk = qp(q, k as i64);
            term_factor(q, k, n) * (1.0 - ab * qp(q, (n + 1 + k) as i64)) * (1.0 - x * qk)
                / ((1.0 - a * qk * q) * (1.0 - c * qk * q) * (1.0 - qk * q))
                * q
        },
        n,
    )
}

fn bqj_transformed(n: usize, x: f64, a: f64, b: f64, c: f64, q: f64) -> SeriesSum {
    let ab = a * b;
    let first = qpoch_ln(ab * q / c, q, n) / qpoch_ln(c * q, q, n)
        * LogMag::from_f64(-c).powi(n as i64)
        * gauss(q, (n * (n + 1)) as i64);
    sum_by_ratio_from(
        first,
        |k| {
            let qk1 = qp(q, k as i64 + 1);
            term_factor(q, k, n) * (1.0 - ab * qp(q, (n + 1 + k) as i64)) * (x - a * qk1)
                / ((1.0 - a * qk1) * (1.0 - ab * qk1 / c) * (1.0 - qk1) * c)
        },
        n,
    )
}

fn bqj(n: usize, x: f64, a: f64, b: f64, c: f64, q: f64) -> SeriesSum {
    better(bqj_direct(n, x, a, b, c, q), bqj_transformed(n, x, a, b, c, q))
}

fn dbqj(n: usize, v: Var, a: f64, b: f64, c: f64, q: f64) -> SeriesSum {
    let ab = a * b;
    let z = a * qp(q, n as i64 + 1) / c;
    sum_by_ratio(
        |k| {
            let qk1 = qp(q, k as i64 + 1);
            pair(v, ab, 1, q, k) * term_factor(q, k, n) / ((1.0 - a * qk1) * (1.0 - ab * qk1 / c) * (1.0 - qk1)) * z
        },
        n,
    )
}

fn dqu_direct(n: usize, x: f64, a: f64, q: f64) -> SeriesSum {
    sum_by_ratio(
        |k| {
            let qk = qp(q, k as i64);
            term_factor(q, k, n) * (1.0 - a * qp(q, (n + 1 + k) as i64)) * (1.0 - x * qk)
                / ((1.0 - a * qk * qk * q * q) * (1.0 - qk * q))
                * q
        },
        n,
    )
}

fn dqu(n: usize, x: f64, a: f64, q: f64) -> SeriesSum {
    let r = a.sqrt();
    better(dqu_direct(n, x, a, q), bqj_transformed(n, x, r, r, -r, q))
}

/// Imaginary-argument variant through little q-Jacobi polynomials in base `q^2`.
fn dqu_tilde(n: usize, x: f64, a: f64, q: f64) -> SeriesSum {
    let big_q = q * q;
    let k = n / 2;
    let y = x * x / (a * big_q);
    let common = qpoch_ln(-a * big_q, big_q, k).powi(-1)
        * LogMag::from_f64(-a).powi(k as i64)
        * gauss(q, (2 * k * (k + 1)) as i64);
    if n % 2 == 0 {
        let first = common * qpoch_ln(q, big_q, k);
        let s = lqj(k, y, 1.0 / q, -a, big_q);
        scaled(s, first)
    } else {
        let first = common * qpoch_ln(q * q * q, big_q, k) * LogMag::from_f64(x);
        let s = lqj(k, y, q, -a, big_q);
        scaled(s, first)
    }
}

fn scaled(mut s: SeriesSum, by: LogMag) -> SeriesSum {
    if by.is_zero() {
        return SeriesSum { value: 0.0, abs_sum: 0.0, ln_scale: 0.0, terms: s.terms, tail_bound: 0.0 };
    }
    s.value *= by.sign;
    s.ln_scale += by.ln_abs;
    s
}

fn ddqu(n: usize, v: Var, aa: f64, q: f64) -> SeriesSum {
    let z = -qp(q, n as i64 + 1);
    sum_by_ratio(
        |k| {
            let qk1 = qp(q, k as i64 + 1);
            pair(v, aa, 1, q, k) * term_factor(q, k, n) / ((1.0 - aa * qk1 * qk1) * (1.0 - qk1)) * z
        },
        n,
    )
}

fn bql_direct(n: usize, x: f64, a: f64, b: f64, q: f64) -> SeriesSum {
    sum_by_ratio(
        |k| {
            let qk = qp(q, k as i64);
            term_factor(q, k, n) * (1.0 - x * qk) / ((1.0 - a * qk * q) * (1.0 - b * qk * q) * (1.0 - qk * q)) * q
        },
        n,
    )
}

fn bql_transformed(n: usize, x: f64, a: f64, b: f64, q: f64) -> SeriesSum {
    let first = qpoch_ln(qp(q, -(n as i64)) / b, q, n).powi(-1);
    sum_by_ratio_from(
        first,
        |k| {
            let qk1 = qp(q, k as i64 + 1);
            term_factor(q, k, n) * (x - a * qk1) / ((1.0 - a * qk1) * (1.0 - qk1) * b)
        },
        n,
    )
}

fn bql(n: usize, x: f64, a: f64, b: f64, q: f64) -> SeriesSum {
    better(bql_direct(n, x, a, b, q), bql_transformed(n, x, a, b, q))
}

fn qmeixner(n: usize, v: Var, alpha: f64, c: f64, q: f64) -> SeriesSum {
    let z = -qp(q, n as i64 + 1) / c;
    sum_by_ratio(
        |k| {
            let qk1 = qp(q, k as i64 + 1);
            single(v, q, k) * term_factor(q, k, n) / ((1.0 - alpha * qk1) * (1.0 - qk1)) * z
        },
        n,
    )
}

fn aqc(n: usize, x: f64, a: f64, q: f64) -> SeriesSum {
    sum_by_ratio(
        |k| term_factor(q, k, n) * (1.0 + a * qp(q, (n + k) as i64)) / (1.0 - qp(q, k as i64 + 1)) * q * x,
        n,
    )
}

fn daqc(n: usize, v: Var, a: f64, q: f64) -> SeriesSum {
    let z = -qp(q, n as i64) / a;
    sum_by_ratio(
        |k| {
            pair(v, -a, 0, q, k) * term_factor(q, k, n) / (1.0 - qp(q, k as i64 + 1)) * z * qp(q, -2 * k as i64)
        },
        n,
    )
}

fn asc1(n: usize, x: f64, a: f64, q: f64) -> SeriesSum {
    let first = LogMag::from_f64(-a).powi(n as i64) * gauss(q, (n * n.saturating_sub(1)) as i64);
    sum_by_ratio_from(
        first,
        |k| term_factor(q, k, n) * (x - qp(q, k as i64)) * (q / a) / (1.0 - qp(q, k as i64 + 1)),
        n,
    )
}

fn asc2(n: usize, v: Var, a: f64, q: f64) -> SeriesSum {
    let first = LogMag::from_f64(-a).powi(n as i64) * gauss(q, -((n * n.saturating_sub(1)) as i64));
    let z = qp(q, n as i64) / a;
    sum_by_ratio_from(
        first,
        |k| single(v, q, k) * term_factor(q, k, n) / (1.0 - qp(q, k as i64 + 1)) * z * -qp(q, -(k as i64)),
        n,
    )
}

fn qcharlier(n: usize, v: Var, a: f64, q: f64) -> SeriesSum {
    let z = -qp(q, n as i64 + 1) / a;
    sum_by_ratio(|k| single(v, q, k) * term_factor(q, k, n) / (1.0 - qp(q, k as i64 + 1)) * z, n)
}

fn lql(n: usize, x: f64, a: f64, q: f64) -> SeriesSum {
    sum_by_ratio(
        |k| {
            let qk1 = qp(q, k as i64 + 1);
            term_factor(q, k, n) / ((1.0 - a * qk1) * (1.0 - qk1)) * q * x
        },
        n,
    )
}

fn bilateral(n: usize, v: Var, p: &Params, q: f64) -> SeriesSum {
    let z = qp(q, n as i64) * p.t1 / p.t2;
    let t12 = p.t1 * p.t2;
    sum_by_ratio(
        |k| {
            bilateral_pair(v, p, q, k) * term_factor(q, k, n)
                / ((1.0 + qp(q, k as i64 + 2) / t12) * (1.0 - qp(q, k as i64 + 1)))
                * z
                * -qp(q, -(k as i64))
        },
        n,
    )
}

fn dispatch(fid: FamilyId, p: &Params, n: usize, v: Var, q: f64) -> SeriesSum {
    use FamilyId::*;
    let x = match v {
        Var::Raw(x) => x,
        Var::Lat(_) => f64::NAN,
    };
    match fid {
        LittleQJacobi => lqj(n, x, p.a, p.b, q),
        DualLittleQJacobi => dlqj(n, v, p.a, p.b, q),
        BigQJacobi => bqj(n, x, p.a, p.b, p.c, q),
        DualBigQJacobi => dbqj(n, v, p.a, p.b, p.c, q),
        DiscreteQUltra => dqu(n, x, p.a, q),
        DiscreteQUltraTilde => dqu_tilde(n, x, p.a, q),
        DualDiscreteQUltra => ddqu(n, v, p.a, q),
        DualDiscreteQUltraTilde => ddqu(n, v, -p.a, q),
        BigQLaguerre => bql(n, x, p.a, p.b, q),
        QMeixner => qmeixner(n, v, p.a, p.b, q),
        AltQCharlier => aqc(n, x, p.a, q),
        DualAltQCharlier => daqc(n, v, p.a, q),
        AlSalamCarlitzI => asc1(n, x, p.a, q),
        AlSalamCarlitzII => asc2(n, v, p.a, q),
        QCharlier => qcharlier(n, v, p.a, q),
        LittleQLaguerre => lql(n, x, p.a, q),
        BilateralASC => bilateral(n, v, p, q),
    }
}

/// Defining series at a raw argument, with its summation record.
pub fn eval_series_detailed(fid: FamilyId, p: &Params, n: usize, x: f64, ctx: &QContext) -> Result<SeriesSum> {
    fid.validate(p, ctx.q())?;
    if !x.is_finite() {
        return Err(QError::InvalidInput(format!("argument must be finite, got {x}")));
    }
    Ok(dispatch(fid, p, n, Var::Raw(x), ctx.q()))
}

/// Defining series of degree `n` at a raw argument.
pub fn eval_series(fid: FamilyId, p: &Params, n: usize, x: f64, ctx: &QContext) -> Result<f64> {
    Ok(eval_series_detailed(fid, p, n, x, ctx)?.to_f64())
}

/// Defining series at a raw argument or at a support point of the family.
pub fn eval_series_at(fid: FamilyId, p: &Params, n: usize, point: Point, ctx: &QContext) -> Result<SeriesSum> {
    let (m, branch) = match point {
        Point::X(x) => return eval_series_detailed(fid, p, n, x, ctx),
        Point::Lattice { m, branch } => (m, branch),
    };
    fid.validate(p, ctx.q())?;
    if !fid.branches().contains(&branch) {
        return Err(QError::InvalidBranch(format!("{branch} is not a branch of {fid}")));
    }
    if fid.is_dual() || fid == FamilyId::BilateralASC {
        if m < 0 && fid != FamilyId::BilateralASC {
            return Err(QError::InvalidInput(format!("lattice index must be nonnegative, got {m}")));
        }
        Ok(dispatch(fid, p, n, Var::Lat(m), ctx.q()))
    } else {
        let x = lattice(fid.lattice_kind(), p, m, branch, ctx.q())?;
        Ok(dispatch(fid, p, n, Var::Raw(x), ctx.q()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext {
        QContext::new(0.5).unwrap()
    }

    #[test]
    fn degree_zero_is_one() {
        let samples = [
            (FamilyId::LittleQJacobi, Params::ab(0.2, 0.1)),
            (FamilyId::AlSalamCarlitzI, Params::a(-1.0)),
            (FamilyId::AlSalamCarlitzII, Params::a(0.5)),
            (FamilyId::BilateralASC, Params::bilateral(0.7, 1.3, 0.6)),
            (FamilyId::DiscreteQUltraTilde, Params::a(1.0)),
        ];
        for (f, p) in samples {
            assert_eq!(eval_series(f, &p, 0, 0.37, &ctx()).unwrap(), 1.0, "{f}");
        }
    }

    #[test]
    fn al_salam_carlitz_value_at_one() {
        let v = eval_series(FamilyId::AlSalamCarlitzI, &Params::a(-1.0), 2, 1.0, &ctx()).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn big_q_jacobi_at_aq() {
        let (a, b, c, q): (f64, f64, f64, f64) = (0.2, 0.1, -0.3, 0.5);
        let p = Params::abc(a, b, c);
        let v = eval_series(FamilyId::BigQJacobi, &p, 3, a * q, &ctx()).unwrap();
        let mut closed = (-c).powi(3) * q.powi(6);
        for j in 0..3 {
            closed *= (1.0 - a * b * q / c * q.powi(j)) / (1.0 - c * q * q.powi(j));
        }
        assert!((v - closed).abs() <= 1e-12 * closed.abs());
    }

    #[test]
    fn both_big_q_jacobi_forms_agree() {
        let (a, b, c, q) = (0.4, 0.7, -0.6, 0.5);
        for n in 0..12 {
            for &x in &[-0.4, 0.05, 0.3, 0.9] {
                let (sd, st) = (bqj_direct(n, x, a, b, c, q), bqj_transformed(n, x, a, b, c, q));
                let (d, t) = (sd.to_f64(), st.to_f64());
                let abs_err = |s: &SeriesSum| 4.0 * f64::EPSILON * s.abs_sum * s.ln_scale.exp() * (s.terms as f64).sqrt();
                let bound = 10.0 * (abs_err(&sd) + abs_err(&st));
                assert!((d - t).abs() <= bound, "n={n} x={x}: {d} vs {t}");
            }
        }
    }

    #[test]
    fn lattice_entry_matches_raw_mu() {
        let p = Params::ab(0.3, 0.4);
        let q: f64 = 0.5;
        for m in 0..6i64 {
            let mu = q.powi(-m as i32) + p.a * p.b * q.powi(m as i32 + 1);
            for n in 0..6 {
                let raw = eval_series(FamilyId::DualLittleQJacobi, &p, n, mu, &ctx()).unwrap();
                let lat = eval_series_at(
                    FamilyId::DualLittleQJacobi,
                    &p,
                    n,
                    Point::Lattice { m, branch: Branch::Unit },
                    &ctx(),
                )
                .unwrap()
                .to_f64();
                assert!((raw - lat).abs() <= 1e-10 * lat.abs().max(1.0));
            }
        }
    }

    #[test]
    fn invalid_params_are_reported() {
        let e = eval_series(FamilyId::LittleQJacobi, &Params::ab(3.0, 0.1), 2, 0.5, &ctx());
        assert!(matches!(e, Err(QError::InvalidParams(_))));
    }
}
