//! Left- and right-hand sides of every registered identity.

use super::{exact, IdentityId, ParamMap};
use crate::error::{QError, Result};
use crate::families::{eval_pair, eval_series_at, Branch, DualPair, FamilyId, Params, Point};
use crate::ortho_duality::tail::certified_sum;
use crate::ortho_duality::{OrthoSpec, RelationId};
use crate::qkernel::{phi, qpoch, qpoch_inf, QContext, SeriesTermination};

/// Absolute tail target for infinite sums on the left-hand sides.
const SUM_TARGET: f64 = 1e-15;
/// Largest integer parameter accepted (degrees, lattice indices, orders).
const MAX_INDEX: f64 = 60.0;

fn get(p: &ParamMap, name: &str) -> f64 {
    p[name]
}

fn index(p: &ParamMap, name: &str) -> Result<usize> {
    let v = p[name];
    if v < 0.0 || v.fract() != 0.0 || v > MAX_INDEX {
        return Err(QError::DomainViolation(format!(
            "{name} must be an integer in 0..={MAX_INDEX}, got {v}"
        )));
    }
    Ok(v as usize)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(QError::DomainViolation(msg()))
    }
}

fn inside_unit(name: &str, z: f64) -> Result<()> {
    require(z.abs() < 1.0, || format!("{name} = {z} must satisfy |{name}| < 1"))
}

fn phi_inf(numer: &[f64], denom: &[f64], z: f64, ctx: &QContext) -> Result<f64> {
    phi(numer, denom, z, SeriesTermination::Adaptive, ctx)
}

fn phi_fin(numer: &[f64], denom: &[f64], z: f64, n: usize, ctx: &QContext) -> Result<f64> {
    phi(numer, denom, z, SeriesTermination::Terminating(n), ctx)
}

fn pinf(a: f64, ctx: &QContext) -> Result<f64> {
    qpoch_inf(a, ctx)
}

fn pinfs(params: &[f64], ctx: &QContext) -> Result<f64> {
    params.iter().try_fold(1.0, |acc, &a| Ok(acc * pinf(a, ctx)?))
}

fn tri(q: f64, k: usize) -> f64 {
    q.powf((k * k.saturating_sub(1)) as f64 / 2.0)
}

fn sum<F: FnMut(usize) -> Result<f64>>(term: F, ctx: &QContext) -> Result<f64> {
    Ok(certified_sum(term, 4, ctx.max_terms(), SUM_TARGET)?.sum)
}

/// Finite `rphis` in an arbitrary base (including bases above one), summed
/// over `k = 0..=n` with the usual `[(-1)^k base^(k(k-1)/2)]^(1+s-r)` factor.
fn finite_phi(numer: &[f64], denom: &[f64], z: f64, base: f64, n: usize) -> f64 {
    let excess = 1 + denom.len() as i32 - numer.len() as i32;
    (0..=n)
        .map(|k| {
            let num: f64 = numer.iter().map(|&a| qpoch(a, base, k)).product();
            let den: f64 = denom.iter().map(|&b| qpoch(b, base, k)).product::<f64>() * qpoch(base, base, k);
            let sign = if k % 2 == 1 && excess % 2 != 0 { -1.0 } else { 1.0 };
            let extra = base.powf(excess as f64 * (k * k.saturating_sub(1)) as f64 / 2.0);
            num / den * z.powi(k as i32) * sign * extra
        })
        .sum()
}

fn lattice(m: usize, branch: Branch) -> Point {
    Point::Lattice { m: m as i64, branch }
}

fn family_at(fid: FamilyId, p: &Params, n: usize, m: usize, branch: Branch, ctx: &QContext) -> Result<f64> {
    Ok(eval_series_at(fid, p, n, lattice(m, branch), ctx)?.to_f64())
}

/// Dual polynomial of degree `n` at lattice index `m`, through the pair evaluator.
fn dual_of(pair: DualPair, p: &Params, m: usize, n: usize, ctx: &QContext) -> Result<f64> {
    Ok(eval_pair(pair, p, m, n, ctx)?.dual.to_f64())
}

/// Primal polynomial of degree `m` at support index `n`.
fn primal_of(pair: DualPair, p: &Params, m: usize, n: usize, ctx: &QContext) -> Result<f64> {
    Ok(eval_pair(pair, p, m, n, ctx)?.primal.to_f64())
}

/// Coefficients of a power series in `t`, truncated at a fixed order.
#[derive(Debug, Clone)]
struct Truncated(Vec<f64>);

impl Truncated {
    fn mul(&self, other: &Truncated) -> Truncated {
        let n = self.0.len();
        let mut out = vec![0.0; n];
        for (i, &x) in self.0.iter().enumerate() {
            for (j, &y) in other.0.iter().enumerate().take(n - i) {
                out[i + j] += x * y;
            }
        }
        Truncated(out)
    }

    fn at(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

/// Sum `sum_n w_n D_r(n) D_s(n)` over all integers `n`, both directions certified.
fn bilateral_sum<F: FnMut(i64) -> Result<f64>>(mut term: F, ctx: &QContext) -> Result<f64> {
    let up = certified_sum(|j| term(j as i64), 4, ctx.max_terms(), SUM_TARGET)?.sum;
    let down = certified_sum(|j| term(-(j as i64) - 1), 4, ctx.max_terms(), SUM_TARGET)?.sum;
    Ok(up + down)
}

pub(super) fn evaluate(id: IdentityId, p: &ParamMap, ctx: &QContext) -> Result<(f64, f64)> {
    use IdentityId::*;
    let q = ctx.q();
    let qq = ctx.with_base(q * q)?;
    let big_q = q * q;
    match id {
        LittleQJacobiWeightSum => {
            let (a, b) = (get(p, "a"), get(p, "b"));
            require(a > 0.0 && a * q < 1.0 && b * q < 1.0, || "needs 0 < aq < 1 and bq < 1".into())?;
            let ab = a * b;
            let lhs = sum(
                |n| {
                    Ok(qpoch(ab * q, q, n) * qpoch(b * q, q, n) / (qpoch(a * q, q, n) * qpoch(q, q, n))
                        * (1.0 - ab * q.powi(2 * n as i32 + 1))
                        / (1.0 - ab * q)
                        * a.powi(n as i32)
                        * q.powi((n * n) as i32))
                },
                ctx,
            )?;
            Ok((lhs, pinf(ab * q * q, ctx)? / pinf(a * q, ctx)?))
        }
        SplitFactorRatio => {
            let (a, n) = (get(p, "a"), index(p, "n")?);
            require(a.abs() < 1.0 && a != 0.0, || "needs 0 < |a| < 1".into())?;
            let lhs = qpoch(a * q, q, n) * qpoch(-a * q, q, n) / (qpoch(a, q, n) * qpoch(-a, q, n));
            Ok((lhs, (1.0 - a * a * q.powi(2 * n as i32)) / (1.0 - a * a)))
        }
        JacksonSum => {
            let (a, b, c, d) = (get(p, "a"), get(p, "b"), get(p, "c"), get(p, "d"));
            require(a > 0.0, || "needs a > 0".into())?;
            let z = a * q / (b * c * d);
            inside_unit("aq/(bcd)", z)?;
            let s = a.sqrt();
            let lhs = phi_inf(&[a, q * s, -q * s, b, c, d], &[s, -s, a * q / b, a * q / c, a * q / d], z, ctx)?;
            let rhs = pinfs(&[a * q, a * q / (b * c), a * q / (b * d), a * q / (c * d)], ctx)?
                / pinfs(&[a * q / b, a * q / c, a * q / d, z], ctx)?;
            Ok((lhs, rhs))
        }
        JacksonSumTerminating => {
            let (a, c, d, n) = (get(p, "a"), get(p, "c"), get(p, "d"), index(p, "n")?);
            require(a > 0.0, || "needs a > 0".into())?;
            let b = q.powi(-(n as i32));
            let s = a.sqrt();
            let lhs = phi_fin(
                &[b, a, q * s, -q * s, c, d],
                &[s, -s, a * q / b, a * q / c, a * q / d],
                a * q / (b * c * d),
                n,
                ctx,
            )?;
            let rhs = qpoch(a * q, q, n) * qpoch(a * q / (c * d), q, n) / (qpoch(a * q / c, q, n) * qpoch(a * q / d, q, n));
            Ok((lhs, rhs))
        }
        JacksonLimitTwoInfinite => {
            let (a, b) = (get(p, "a"), get(p, "b"));
            require(a > 0.0, || "needs a > 0".into())?;
            inside_unit("aq/b", a * q / b)?;
            let s = a.sqrt();
            let lhs = phi_inf(&[a, q * s, -q * s, b], &[s, -s, a * q / b, 0.0, 0.0], a * q / b, ctx)?;
            Ok((lhs, pinf(a * q, ctx)? / pinf(a * q / b, ctx)?))
        }
        JacksonLimitOneInfinite => {
            let (a, b, c) = (get(p, "a"), get(p, "b"), get(p, "c"));
            require(a > 0.0, || "needs a > 0".into())?;
            let z = a * q / (b * c);
            inside_unit("aq/(bc)", z)?;
            let s = a.sqrt();
            let lhs = phi_inf(&[a, q * s, -q * s, b, c], &[s, -s, a * q / b, a * q / c, 0.0], z, ctx)?;
            let rhs = pinfs(&[a * q, z], ctx)? / pinfs(&[a * q / b, a * q / c], ctx)?;
            Ok((lhs, rhs))
        }
        DualBigQJacobiWeightSum | DualBigQJacobiSwappedWeightSum => {
            let (a, b, c) = (get(p, "a"), get(p, "b"), get(p, "c"));
            FamilyId::DualBigQJacobi.validate(&Params::abc(a, b, c), q)?;
            let ab = a * b;
            let swapped = id == DualBigQJacobiSwappedWeightSum;
            let (num, den, ratio) = if swapped {
                ([ab * q, b * q, c * q], [a * q, ab * q / c], -a / c)
            } else {
                ([a * q, ab * q / c, ab * q], [b * q, c * q], -c / a)
            };
            let lhs = sum(
                |n| {
                    let ni = n as i32;
                    let top: f64 = num.iter().map(|&x| qpoch(x, q, n)).product();
                    let bottom: f64 = den.iter().map(|&x| qpoch(x, q, n)).product::<f64>() * qpoch(q, q, n);
                    Ok((1.0 - ab * q.powi(2 * ni + 1)) / (1.0 - ab * q) * top / bottom
                        * ratio.powi(ni)
                        * tri(q, n))
                },
                ctx,
            )?;
            let rhs = if swapped {
                pinfs(&[ab * q * q, a / c], ctx)? / pinfs(&[a * q, ab * q / c], ctx)?
            } else {
                pinfs(&[ab * q * q, c / a], ctx)? / pinfs(&[b * q, c * q], ctx)?
            };
            Ok((lhs, rhs))
        }
        EtaMoments => {
            let (a, k) = (get(p, "a"), index(p, "k")?);
            require(a > 0.0 && a * q < 1.0, || "needs 0 < aq < 1".into())?;
            let float = certified_sum(
                |n| {
                    let ni = n as i32;
                    let mu = q.powi(-ni) + a * q.powi(ni + 1);
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    Ok(sign * tri(q, n) * (1.0 - a * q.powi(2 * ni + 1)) / (1.0 - a * q) * qpoch(a * q, q, n)
                        / qpoch(q, q, n)
                        * mu.powi(k as i32))
                },
                4,
                ctx.max_terms(),
                SUM_TARGET,
            )?;
            // The terms reach q^(-k^2/2) in size, so the retained terms are summed exactly.
            Ok((exact::eta_partial(a, q, k, float.terms)?, 0.0))
        }
        TripleProductLimit => {
            let a = get(p, "a");
            require(a * q < 1.0, || "needs aq < 1".into())?;
            let lhs = sum(
                |n| Ok(a.powi(n as i32) * q.powi((n * n) as i32) / (qpoch(a * q, q, n) * qpoch(q, q, n))),
                ctx,
            )?;
            Ok((lhs, 1.0 / pinf(a * q, ctx)?))
        }
        QBinomial => {
            let (a, b) = (get(p, "a"), get(p, "b"));
            inside_unit("aq", a * q)?;
            let lhs = sum(|n| Ok(qpoch(b * q, q, n) * (a * q).powi(n as i32) / qpoch(q, q, n)), ctx)?;
            Ok((lhs, pinf(a * b * q * q, ctx)? / pinf(a * q, ctx)?))
        }
        SearsTwoTerm => {
            let (a, b, c) = (get(p, "a"), get(p, "b"), get(p, "c"));
            FamilyId::DualBigQJacobi.validate(&Params::abc(a, b, c), q)?;
            let (aa, bb, cc) = (a * q, a * b * q / c, a * q / c);
            let first = pinfs(&[aa * q / cc, bb * q / cc], ctx)? / pinfs(&[q / cc, aa * bb * q / cc], ctx)?
                * phi_inf(&[aa, bb], &[cc], q, ctx)?;
            let second = pinfs(&[aa, bb], ctx)? / pinfs(&[cc / q, aa * bb * q / cc], ctx)?
                * phi_inf(&[aa * q / cc, bb * q / cc], &[q * q / cc], q, ctx)?;
            Ok((first + second, 1.0))
        }
        SearsThreeTerm => {
            let (a, b) = (get(p, "a"), get(p, "b"));
            FamilyId::BigQLaguerre.validate(&Params::ab(a, b), q)?;
            let first = pinf(b * q, ctx)? / pinf(b / a, ctx)? * phi_inf(&[a * q, 0.0], &[a * q / b], q, ctx)?;
            let second = pinf(a * q, ctx)? / pinf(a / b, ctx)? * phi_inf(&[b * q, 0.0], &[b * q / a], q, ctx)?;
            Ok((first + second, 1.0))
        }
        SearsAlSalamCarlitz => {
            let a = get(p, "a");
            FamilyId::AlSalamCarlitzI.validate(&Params::a(a), q)?;
            let first = sum(|m| Ok(q.powi(m as i32) / (qpoch(q / a, q, m) * qpoch(q, q, m))), ctx)? / pinf(a, ctx)?;
            let second = sum(|m| Ok(q.powi(m as i32) / (qpoch(a * q, q, m) * qpoch(q, q, m))), ctx)? / pinf(1.0 / a, ctx)?;
            Ok((first + second, 1.0))
        }
        SinghQuadratic => {
            let (k, b2, c) = (index(p, "k")?, get(p, "b2"), get(p, "c"));
            require(b2 > 0.0, || "needs b2 > 0".into())?;
            let a2 = q.powi(-2 * k as i32);
            // The denominators +-ab sqrt(q) only enter through (a^2 b^2 q; q^2)_j.
            let ex = exact::ExactBase::new(q)?;
            let (a2e, b2e) = (ex.pow(-2 * k as i64), exact::rational(b2)?);
            let pair_square = &a2e * &b2e * ex.pow(1);
            let lhs = ex.quadratic_phi(&[a2e, b2e, exact::rational(c)?], &pair_square, 2 * k)?;
            let rhs = phi_fin(&[a2, b2, c * c], &[a2 * b2 * q, 0.0], big_q, k, &qq)?;
            Ok((lhs, rhs))
        }
        SinghQuadraticExtended => {
            let (k, a, x) = (index(p, "k")?, get(p, "a"), get(p, "x"));
            require(a > 0.0, || "needs a > 0".into())?;
            let ki = k as i32;
            let ex = exact::ExactBase::new(q)?;
            let ae = exact::rational(a)?;
            let k2 = 2 * k as i64;
            let numer = [ex.pow(-k2 - 1), &ae * ex.pow(k2 + 2), exact::rational(x)?];
            let lhs = ex.quadratic_phi(&numer, &(&ae * ex.pow(2)), 2 * k + 1)?;
            let rhs = x * phi_fin(&[q.powi(-2 * ki), a * q.powi(2 * ki + 3), x * x], &[a * big_q, 0.0], big_q, k, &qq)?;
            Ok((lhs, rhs))
        }
        DiscreteQUltraEvenForm | DiscreteQUltraOddForm => {
            let (a, k, x) = (get(p, "a"), index(p, "k")?, get(p, "x"));
            let pa = Params::a(a);
            let ki = k as i32;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let common = a.powi(ki) / qpoch(a * big_q, big_q, k) * sign * q.powi(ki * (ki + 1));
            if id == DiscreteQUltraEvenForm {
                let lhs = eval_series_at(FamilyId::DiscreteQUltra, &pa, 2 * k, Point::X(x), ctx)?.to_f64();
                let rhs = common
                    * qpoch(q, big_q, k)
                    * phi_fin(&[big_q.powi(-ki), a * q.powi(2 * ki + 1)], &[q], x * x / a, k, &qq)?;
                Ok((lhs, rhs))
            } else {
                let lhs = eval_series_at(FamilyId::DiscreteQUltra, &pa, 2 * k + 1, Point::X(x), ctx)?.to_f64();
                let rhs = common
                    * qpoch(q.powi(3), big_q, k)
                    * x
                    * phi_fin(&[big_q.powi(-ki), a * q.powi(2 * ki + 3)], &[q.powi(3)], x * x / a, k, &qq)?;
                Ok((lhs, rhs))
            }
        }
        DualDiscreteQUltraEvenForm | DualDiscreteQUltraOddForm => {
            let (a, n, k) = (get(p, "a"), index(p, "n")?, index(p, "k")?);
            let tilde = get(p, "tilde");
            require(tilde == 0.0 || tilde == 1.0, || format!("tilde must be 0 or 1, got {tilde}"))?;
            let (fid, branch, aa) = if tilde == 1.0 {
                (FamilyId::DualDiscreteQUltraTilde, Branch::Minus, -a)
            } else {
                (FamilyId::DualDiscreteQUltra, Branch::Plus, a)
            };
            let (ki, ni) = (k as i32, n as i32);
            if id == DualDiscreteQUltraEvenForm {
                let lhs = family_at(fid, &Params::a(a), n, 2 * k, branch, ctx)?;
                let rhs = phi_fin(
                    &[big_q.powi(-ni), big_q.powi(-ki), aa * q.powi(2 * ki + 1)],
                    &[aa * big_q],
                    q.powi(2 * ni + 1),
                    n,
                    &qq,
                )?;
                Ok((lhs, rhs))
            } else {
                let lhs = family_at(fid, &Params::a(a), n, 2 * k + 1, branch, ctx)?;
                let rhs = q.powi(ni)
                    * phi_fin(
                        &[big_q.powi(-ni), big_q.powi(-ki), aa * q.powi(2 * ki + 3)],
                        &[aa * big_q],
                        q.powi(2 * ni - 1),
                        n,
                        &qq,
                    )?;
                Ok((lhs, rhs))
            }
        }
        QuadraticReductionEven | QuadraticReductionOdd | QuadraticReductionShifted => {
            let (a2, k, n, c) = (get(p, "a2"), index(p, "k")?, index(p, "n")?, get(p, "c"));
            require(a2 > 0.0, || "needs a2 > 0".into())?;
            require(c != 0.0, || "needs c != 0".into())?;
            let (ki, ni) = (k as i32, n as i32);
            let base_q_side = |alpha: f64, beta: f64| -> f64 {
                (0..=n)
                    .map(|m| {
                        qpoch(alpha, q, m) * qpoch(beta, q, m) * qpoch(q.powi(-ni), q, m)
                            / (qpoch(-a2 * big_q, big_q, m) * qpoch(q, q, m))
                            * (-q.powi(ni + 1)).powi(m as i32)
                    })
                    .sum()
            };
            let odd = id == QuadraticReductionOdd;
            if odd {
                let lhs = base_q_side(q.powi(-2 * ki - 1) / c, -c * a2 * q.powi(2 * ki + 2));
                let rhs = q.powi(ni)
                    * phi_fin(
                        &[big_q.powi(-ni), q.powi(-2 * ki) / c, -c * a2 * q.powi(2 * ki + 3)],
                        &[-a2 * big_q],
                        q.powi(2 * ni - 1),
                        n,
                        &qq,
                    )?;
                Ok((lhs, rhs))
            } else {
                let (alpha, beta) = (q.powi(-2 * ki) / c, -c * a2 * q.powi(2 * ki + 1));
                let lhs = base_q_side(alpha, beta);
                let rhs = phi_fin(&[big_q.powi(-ni), alpha, beta], &[-a2 * big_q], q.powi(2 * ni + 1), n, &qq)?;
                Ok((lhs, rhs))
            }
        }
        GenDualBigQJacobiAq | GenDualBigQJacobiAqAlt | GenDualBigQJacobiAbqc => {
            let (a, b, c, x, t) = (get(p, "a"), get(p, "b"), get(p, "c"), index(p, "x")?, get(p, "t"));
            let pp = Params::abc(a, b, c);
            FamilyId::DualBigQJacobi.validate(&pp, q)?;
            inside_unit("t", t)?;
            let ab = a * b;
            let xi = x as i32;
            let coef = if id == GenDualBigQJacobiAbqc { ab * q / c } else { a * q };
            let lhs = sum(
                |n| Ok(qpoch(coef, q, n) / qpoch(q, q, n) * t.powi(n as i32) * dual_of(DualPair::BigQJacobiA, &pp, x, n, ctx)?),
                ctx,
            )?;
            let qx = q.powi(-xi);
            let rhs = match id {
                GenDualBigQJacobiAq => {
                    pinf(a * q * t, ctx)? / pinf(t, ctx)?
                        * phi_inf(&[qx, ab * q.powi(xi + 1)], &[ab * q / c, a * q * t], a * q * t / c, ctx)?
                }
                GenDualBigQJacobiAqAlt => {
                    pinf(a * q.powi(xi + 1) * t, ctx)? / pinf(t, ctx)?
                        * phi_inf(&[qx, qx / c], &[ab * q / c], a * t * q.powi(xi + 1), ctx)?
                }
                _ => {
                    pinf(ab * q * t / c, ctx)? / pinf(t, ctx)?
                        * phi_inf(&[qx, ab * q.powi(xi + 1)], &[a * q, ab * q * t / c], a * q * t / c, ctx)?
                }
            };
            Ok((lhs, rhs))
        }
        GenDualLittleQJacobi => {
            let (a, b, x, t) = (get(p, "a"), get(p, "b"), index(p, "x")?, get(p, "t"));
            let pp = Params::ab(a, b);
            FamilyId::DualLittleQJacobi.validate(&pp, q)?;
            inside_unit("t", t)?;
            inside_unit("at", a * t)?;
            let lhs = sum(
                |n| {
                    Ok(qpoch(b * q, q, n) / qpoch(q, q, n)
                        * (a * t).powi(n as i32)
                        * dual_of(DualPair::LittleQJacobi, &pp, x, n, ctx)?)
                },
                ctx,
            )?;
            let rhs = pinfs(&[t * q.powi(-(x as i32)), a * b * t * q.powi(x as i32 + 1)], ctx)? / pinfs(&[a * t, t], ctx)?;
            Ok((lhs, rhs))
        }
        JacksonTransformation => {
            let (a, b, c, z) = (get(p, "A"), get(p, "B"), get(p, "C"), get(p, "z"));
            inside_unit("z", z)?;
            let lhs = phi_inf(&[a, b], &[c], z, ctx)?;
            let rhs = pinf(a * z, ctx)? / pinf(z, ctx)? * phi_inf(&[a, c / b], &[c, a * z], b * z, ctx)?;
            Ok((lhs, rhs))
        }
        GenBigQLaguerre => {
            let (a, b, s, t) = (get(p, "a"), get(p, "b"), index(p, "s")?, get(p, "t"));
            let pp = Params::ab(a, b);
            FamilyId::BigQLaguerre.validate(&pp, q)?;
            require(t > 0.0 && -b * q * t < 1.0, || "needs t > 0 and -bqt < 1".into())?;
            let x = a * q.powi(s as i32 + 1);
            let lhs = sum(
                |n| {
                    Ok(qpoch(a * q, q, n) * qpoch(b * q, q, n) / qpoch(q, q, n) / tri(q, n)
                        * primal_of(DualPair::BigQLaguerreA, &pp, n, s, ctx)?
                        * t.powi(n as i32))
                },
                ctx,
            )?;
            let rhs = pinf(-a * b * q * q * t, ctx)? / pinf(-b * q * t, ctx)?
                * phi_inf(&[a * q / x, 0.0], &[-1.0 / (b * t)], x / b, ctx)?;
            Ok((lhs, rhs))
        }
        GenLittleQLaguerreProduct => {
            let (a, s, t) = (get(p, "a"), index(p, "s")?, get(p, "t"));
            let pp = Params::a(a);
            FamilyId::LittleQLaguerre.validate(&pp, q)?;
            inside_unit("t", t)?;
            let x = q.powi(s as i32);
            let lhs = sum(
                |n| {
                    Ok(qpoch(a * q, q, n) / qpoch(q, q, n)
                        * primal_of(DualPair::LittleQLaguerre, &pp, n, s, ctx)?
                        * t.powi(n as i32))
                },
                ctx,
            )?;
            let rhs = pinf(a * q * t, ctx)? * phi_inf(&[1.0 / x, 0.0], &[], x * t, ctx)?;
            Ok((lhs, rhs))
        }
        GenLittleQLaguerreFormal => {
            let (a, x, t, order) = (get(p, "a"), get(p, "x"), get(p, "t"), index(p, "order")?);
            let pp = Params::a(a);
            FamilyId::LittleQLaguerre.validate(&pp, q)?;
            require(order <= 8, || format!("order must be at most 8, got {order}"))?;
            let len = order + 1;
            let lhs = Truncated(
                (0..len)
                    .map(|n| {
                        let v = eval_series_at(FamilyId::LittleQLaguerre, &pp, n, Point::X(x), ctx)?.to_f64();
                        Ok(qpoch(a * q, q, n) / qpoch(q, q, n) * v)
                    })
                    .collect::<Result<_>>()?,
            );
            let e1 = Truncated(
                (0..len)
                    .map(|j| {
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        sign * tri(q, j) * (a * q).powi(j as i32) / qpoch(q, q, j)
                    })
                    .collect(),
            );
            let e2 = Truncated((0..len).map(|j| 1.0 / qpoch(q, q, j)).collect());
            let mut inner = Truncated(vec![0.0; len]);
            for k in 0..len {
                let mut f = vec![0.0; len];
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                f[k] = sign * q.powf(-((k * (k + 1)) as f64) / 2.0) * (q * x).powi(k as i32) / qpoch(q, q, k);
                let mut f = Truncated(f);
                for j in 1..=k {
                    f = f.mul(&Truncated((0..len).map(|i| q.powi(-((j * i) as i32))).collect()));
                }
                for (acc, v) in inner.0.iter_mut().zip(f.0) {
                    *acc += v;
                }
            }
            let rhs = e1.mul(&e2).mul(&inner);
            Ok((lhs.at(t), rhs.at(t)))
        }
        GenAlSalamCarlitzII => {
            let (a, x, t) = (get(p, "a"), index(p, "x")?, get(p, "t"));
            let pp = Params::a(a);
            FamilyId::AlSalamCarlitzII.validate(&pp, q)?;
            inside_unit("t", t)?;
            inside_unit("at", a * t)?;
            let lhs = sum(
                |n| {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    Ok(sign * tri(q, n) / qpoch(q, q, n)
                        * t.powi(n as i32)
                        * dual_of(DualPair::LittleQLaguerre, &pp, x, n, ctx)?)
                },
                ctx,
            )?;
            let rhs = pinf(t * q.powi(-(x as i32)), ctx)? / pinfs(&[a * t, t], ctx)?;
            Ok((lhs, rhs))
        }
        AlSalamChiharaLink => {
            let (alpha, beta, n, m) = (get(p, "alpha"), get(p, "beta"), index(p, "n")?, index(p, "m")?);
            require(alpha > 0.0 && beta > 0.0, || "needs alpha, beta > 0".into())?;
            let pp = Params::ab(beta / alpha, 1.0 / (alpha * beta * q));
            let lhs = family_at(FamilyId::DualLittleQJacobi, &pp, n, m, Branch::Unit, ctx)?;
            let inv = 1.0 / q;
            let z = alpha * q.powi(-(m as i32));
            let chihara = qpoch(alpha * beta, inv, n) / alpha.powi(n as i32)
                * finite_phi(&[inv.powi(-(n as i32)), alpha * z, alpha / z], &[alpha * beta, 0.0], inv, inv, n);
            let rhs = tri(q, n) / ((-beta).powi(n as i32) * qpoch(1.0 / (alpha * beta), q, n)) * chihara;
            Ok((lhs, rhs))
        }
        QMeixnerInverseBase => {
            let (b, c, n, x) = (get(p, "b"), get(p, "c"), index(p, "n")?, get(p, "x"));
            let pp = Params::ab(1.0 / b, -c);
            FamilyId::BigQLaguerre.validate(&pp, q)?;
            let inv = 1.0 / q;
            let lhs = finite_phi(&[inv.powi(-(n as i32)), x], &[b * inv], -inv.powi(n as i32 + 1) / c, inv, n);
            let rhs = qpoch(-q.powi(-(n as i32)) / c, q, n)
                * eval_series_at(FamilyId::BigQLaguerre, &pp, n, Point::X(q * x / b), ctx)?.to_f64();
            Ok((lhs, rhs))
        }
        DualLittleQJacobiBZero => {
            let (a, n, x) = (get(p, "a"), index(p, "n")?, index(p, "x")?);
            let pp = Params::a(a);
            FamilyId::AlSalamCarlitzII.validate(&pp, q)?;
            let ni = n as i32;
            let lhs = phi_fin(&[q.powi(-ni), q.powi(-(x as i32))], &[], q.powi(ni) / a, n, ctx)?;
            let rhs = (-a).powi(-ni) * tri(q, n) * family_at(FamilyId::AlSalamCarlitzII, &pp, n, x, Branch::Unit, ctx)?;
            Ok((lhs, rhs))
        }
        DualBigQJacobiSymmetry => {
            let (a, b, c, n, m) = (get(p, "a"), get(p, "b"), get(p, "c"), index(p, "n")?, index(p, "m")?);
            let pp = Params::abc(a, b, c);
            FamilyId::DualBigQJacobi.validate(&pp, q)?;
            let lhs = family_at(FamilyId::DualBigQJacobi, &pp, n, m, Branch::Unit, ctx)?;
            let (a2, b2, c2) = (a * b / c, c, b);
            let ab = a2 * b2;
            let rhs = phi_fin(
                &[q.powi(-(n as i32)), q.powi(-(m as i32)), ab * q.powi(m as i32 + 1)],
                &[a2 * q, ab * q / c2],
                a2 * q.powi(n as i32 + 1) / c2,
                n,
                ctx,
            )?;
            Ok((lhs, rhs))
        }
        DualBigQJacobiCross => {
            let (a, b, c, n, n2) = (get(p, "a"), get(p, "b"), get(p, "c"), index(p, "n")?, index(p, "n2")?);
            let pp = Params::abc(a, b, c);
            FamilyId::DualBigQJacobi.validate(&pp, q)?;
            let ab = a * b;
            let lhs = sum(
                |m| {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let w = sign * (1.0 - ab * q.powi(2 * m as i32 + 1)) * qpoch(ab * q, q, m)
                        / ((1.0 - ab * q) * qpoch(q, q, m))
                        * tri(q, m);
                    Ok(w * dual_of(DualPair::BigQJacobiA, &pp, m, n, ctx)? * dual_of(DualPair::BigQJacobiC, &pp, m, n2, ctx)?)
                },
                ctx,
            )?;
            Ok((lhs, 0.0))
        }
        QCharlierCross => {
            let (a, n, n2) = (get(p, "a"), index(p, "n")?, index(p, "n2")?);
            let pp = Params::a(a);
            FamilyId::AlSalamCarlitzI.validate(&pp, q)?;
            let lhs = sum(
                |m| {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    Ok(sign * tri(q, m) / qpoch(q, q, m)
                        * dual_of(DualPair::AlSalamCarlitzIUnit, &pp, m, n, ctx)?
                        * dual_of(DualPair::AlSalamCarlitzIA, &pp, m, n2, ctx)?)
                },
                ctx,
            )?;
            Ok((lhs, 0.0))
        }
        QMeixnerCross => {
            let (a, b, n, n2) = (get(p, "a"), get(p, "b"), index(p, "n")?, index(p, "n2")?);
            let pp = Params::ab(a, b);
            FamilyId::BigQLaguerre.validate(&pp, q)?;
            let lhs = sum(
                |m| {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    Ok(sign * tri(q, m) / qpoch(q, q, m)
                        * dual_of(DualPair::BigQLaguerreA, &pp, m, n, ctx)?
                        * dual_of(DualPair::BigQLaguerreB, &pp, m, n2, ctx)?)
                },
                ctx,
            )?;
            Ok((lhs, 0.0))
        }
        BilateralTildeOrthogonality => {
            let (a, d, r, s) = (get(p, "a"), get(p, "d"), index(p, "r")?, index(p, "s")?);
            require(d > 0.0, || "needs d > 0".into())?;
            let spec = OrthoSpec::with_context(RelationId::BilateralTilde, Params { a, d, ..Params::default() }, ctx.clone())?;
            let root = (a * q).sqrt();
            let poly = |deg: usize, j: i64| -> f64 {
                let alpha = q.powi(-2 * j as i32) * root / d;
                let beta = -q.powi(2 * j as i32) * d * root;
                let di = deg as i32;
                (0..=deg)
                    .map(|k| {
                        qpoch(alpha, q, k) * qpoch(beta, q, k) * qpoch(q.powi(-di), q, k)
                            / (qpoch(-a * big_q, big_q, k) * qpoch(q, q, k))
                            * (-q.powi(di + 1)).powi(k as i32)
                    })
                    .sum()
            };
            let lhs = bilateral_sum(|j| Ok(spec.weight_ln(j, Branch::Unit)?.to_f64() * poly(r, j) * poly(s, j)), ctx)?;
            let rhs = if r == s {
                qpoch(big_q, big_q, r) * q.powi(-(r as i32)) / qpoch(-a * big_q, big_q, r)
            } else {
                0.0
            };
            Ok((lhs, rhs))
        }
    }
}
