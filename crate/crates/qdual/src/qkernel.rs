//! q-Pochhammer symbols, infinite q-products, basic hypergeometric series and
//! Jackson's q-exponential.
//!
//! All routines work in binary64. Long products and sums are guarded against
//! overflow by an explicit logarithmic scale ([`LogMag`], [`SeriesSum::ln_scale`]).

use std::ops::{Div, Mul};

use serde::Serialize;

use crate::error::{QError, Result};

/// A numerator parameter `x` is read as `q^{-n}` when `|x q^n - 1|` is below this.
pub const TERMINATION_TOL: f64 = 1e-12;

/// Product factors `1 - a q^j` smaller than this in magnitude are exact zeros.
pub const ZERO_FACTOR_TOL: f64 = 1e-13;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_LN: f64 = 345.387_763_949_107_0; // ln(1e150)

/// Evaluation settings shared by every q-series routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QContext {
    q: f64,
    eps: f64,
    max_terms: usize,
    min_subnormal_guard: f64,
}

impl QContext {
    pub const DEFAULT_EPS: f64 = 1e-16;
    pub const DEFAULT_MAX_TERMS: usize = 10_000;
    pub const DEFAULT_GUARD: f64 = 1e-300;

    pub fn new(q: f64) -> Result<Self> {
        Self::with_settings(q, Self::DEFAULT_EPS, Self::DEFAULT_MAX_TERMS, Self::DEFAULT_GUARD)
    }

    pub fn with_settings(q: f64, eps: f64, max_terms: usize, min_subnormal_guard: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QError::DomainViolation(format!("base q must lie in (0,1), got {q}")));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(QError::DomainViolation(format!("eps must be positive, got {eps}")));
        }
        if max_terms == 0 {
            return Err(QError::DomainViolation("max_terms must be at least 1".into()));
        }
        if !(min_subnormal_guard >= 0.0) {
            return Err(QError::DomainViolation("min_subnormal_guard must be nonnegative".into()));
        }
        Ok(Self { q, eps, max_terms, min_subnormal_guard })
    }

    /// Same settings with a different base (used for base-q^2 rewrites).
    pub fn with_base(&self, q: f64) -> Result<Self> {
        Self::with_settings(q, self.eps, self.max_terms, self.min_subnormal_guard)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn min_subnormal_guard(&self) -> f64 {
        self.min_subnormal_guard
    }
}

/// How a basic hypergeometric series is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesTermination {
    /// Exact finite sum over `k = 0..=n`; some numerator must equal `q^{-n}`.
    Terminating(usize),
    /// Sum until the certified tail bound drops below `eps` relative.
    Adaptive,
}

/// Upper index of a product or series: finite count or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Count {
    Finite(usize),
    Infinite,
}

/// Signed magnitude stored as `sign * exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogMag {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogMag {
    pub const ONE: LogMag = LogMag { sign: 1.0, ln_abs: 0.0 };
    pub const ZERO: LogMag = LogMag { sign: 0.0, ln_abs: f64::NEG_INFINITY };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self { sign: x.signum(), ln_abs: x.abs().ln() }
        }
    }

    /// `sign * exp(ln_abs)` built from parts.
    pub fn from_parts(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: sign.signum(), ln_abs }
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0.0
    }

    pub fn abs(self) -> Self {
        Self { sign: self.sign.abs(), ln_abs: self.ln_abs }
    }

    pub fn powi(self, k: i64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return if k > 0 { Self::ZERO } else { Self { sign: 1.0, ln_abs: f64::INFINITY } };
        }
        let sign = if k % 2 == 0 { 1.0 } else { self.sign };
        Self { sign, ln_abs: self.ln_abs * k as f64 }
    }

    /// Square root of the magnitude; the sign must be nonnegative.
    pub fn sqrt(self) -> Self {
        Self { sign: self.sign.abs(), ln_abs: 0.5 * self.ln_abs }
    }

    pub fn neg(self) -> Self {
        Self { sign: -self.sign, ln_abs: self.ln_abs }
    }
}

impl Mul for LogMag {
    type Output = LogMag;
    fn mul(self, rhs: LogMag) -> LogMag {
        if self.is_zero() || rhs.is_zero() {
            return LogMag::ZERO;
        }
        LogMag { sign: self.sign * rhs.sign, ln_abs: self.ln_abs + rhs.ln_abs }
    }
}

impl Div for LogMag {
    type Output = LogMag;
    fn div(self, rhs: LogMag) -> LogMag {
        if self.is_zero() {
            return LogMag::ZERO;
        }
        LogMag { sign: self.sign * rhs.sign, ln_abs: self.ln_abs - rhs.ln_abs }
    }
}

/// Result of a summation together with the data needed to judge its accuracy.
///
/// The true sum is `value * exp(ln_scale)`; `abs_sum` is the sum of term
/// magnitudes in the same scale and measures cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub abs_sum: f64,
    pub ln_scale: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

impl SeriesSum {
    fn unit() -> Self {
        Self { value: 1.0, abs_sum: 1.0, ln_scale: 0.0, terms: 1, tail_bound: 0.0 }
    }

    pub fn to_f64(&self) -> f64 {
        if self.ln_scale == 0.0 {
            self.value
        } else {
            self.value * self.ln_scale.exp()
        }
    }

    pub fn log_mag(&self) -> LogMag {
        let v = LogMag::from_f64(self.value);
        LogMag::from_parts(v.sign, v.ln_abs + self.ln_scale)
    }

    /// Estimated relative error from rounding in the summed terms plus the tail.
    pub fn relative_error(&self) -> f64 {
        let rounding = 4.0 * f64::EPSILON * self.abs_sum * (self.terms.max(1) as f64).sqrt();
        let err = rounding + self.tail_bound;
        if self.value == 0.0 {
            if err == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            err / self.value.abs()
        }
    }
}

#[inline]
fn snapped_factor(f: f64) -> f64 {
    if f.abs() <= ZERO_FACTOR_TOL { 0.0 } else { f }
}

/// `(a;q)_n = prod_{j<n} (1 - a q^j)`.
pub fn qpoch(a: f64, q: f64, n: usize) -> f64 {
    let mut prod = 1.0;
    for j in 0..n {
        let f = snapped_factor(1.0 - a * q.powi(j as i32));
        if f == 0.0 {
            return 0.0;
        }
        prod *= f;
    }
    prod
}

/// `(a;q)_n` as a [`LogMag`], safe for long products.
pub fn qpoch_ln(a: f64, q: f64, n: usize) -> LogMag {
    let mut sign = 1.0;
    let mut ln = 0.0;
    for j in 0..n {
        let f = snapped_factor(1.0 - a * q.powi(j as i32));
        if f == 0.0 {
            return LogMag::ZERO;
        }
        sign *= f.signum();
        ln += f.abs().ln();
    }
    LogMag::from_parts(sign, ln)
}

/// Product of `(a_i;q)_n` over several parameters, in log form.
pub fn qpoch_multi_ln(params: &[f64], q: f64, n: usize) -> LogMag {
    params.iter().fold(LogMag::ONE, |acc, &a| acc * qpoch_ln(a, q, n))
}

fn qpoch_inf_parts(a: f64, ctx: &QContext) -> Result<LogMag> {
    let q = ctx.q;
    let target = ctx.eps.min(0.25 * f64::EPSILON);
    let mut sign = 1.0;
    let mut ln = 0.0;
    let mut t = a;
    for _ in 0..ctx.max_terms {
        let f = snapped_factor(1.0 - t);
        if f == 0.0 {
            return Ok(LogMag::ZERO);
        }
        sign *= f.signum();
        ln += f.abs().ln();
        t *= q;
        let at = t.abs();
        if at < ctx.min_subnormal_guard {
            return Ok(LogMag::from_parts(sign, ln));
        }
        if at < 0.5 {
            // sum_{i>=0} |ln(1 - t q^i)| <= |t| / ((1-q)(1-|t|))
            let tail = at / ((1.0 - q) * (1.0 - at));
            if tail <= target {
                return Ok(LogMag::from_parts(sign, ln));
            }
        }
    }
    Err(QError::TermCapExceeded { cap: ctx.max_terms })
}

/// `(a;q)_inf`, exactly zero when some factor vanishes.
pub fn qpoch_inf(a: f64, ctx: &QContext) -> Result<f64> {
    Ok(qpoch_inf_parts(a, ctx)?.to_f64())
}

/// `(a;q)_inf` in log form.
pub fn qpoch_inf_ln(a: f64, ctx: &QContext) -> Result<LogMag> {
    qpoch_inf_parts(a, ctx)
}

/// `(a_1,...,a_k;q)_n` for finite or infinite `n`.
pub fn qpoch_multi(params: &[f64], n: Count, ctx: &QContext) -> Result<f64> {
    if params.is_empty() {
        return Err(QError::InvalidInput("qpoch_multi needs at least one parameter".into()));
    }
    match n {
        Count::Finite(n) => Ok(params.iter().map(|&a| qpoch(a, ctx.q, n)).product()),
        Count::Infinite => {
            let mut acc = LogMag::ONE;
            for &a in params {
                acc = acc * qpoch_inf_parts(a, ctx)?;
            }
            Ok(acc.to_f64())
        }
    }
}

/// Infinite product of several parameters in log form.
pub fn qpoch_inf_multi_ln(params: &[f64], ctx: &QContext) -> Result<LogMag> {
    let mut acc = LogMag::ONE;
    for &a in params {
        acc = acc * qpoch_inf_parts(a, ctx)?;
    }
    Ok(acc)
}

/// If `x = q^{-n}` for some `n >= 0` (within [`TERMINATION_TOL`]), returns `n`.
pub fn terminating_index(x: f64, q: f64) -> Option<usize> {
    if !(x >= 1.0 - TERMINATION_TOL) {
        return None;
    }
    let n = (-(x.ln()) / q.ln()).round();
    if !(0.0..=1e6).contains(&n) {
        return None;
    }
    let n = n as usize;
    if (x * q.powi(n as i32) - 1.0).abs() <= TERMINATION_TOL {
        Some(n)
    } else {
        None
    }
}

/// Accumulates terms `t_0 = 1, t_{k+1} = t_k * ratio(k)` with overflow rescaling.
struct Accumulator {
    term: f64,
    sum: f64,
    abs_sum: f64,
    ln_scale: f64,
    terms: usize,
}

impl Accumulator {
    fn new() -> Self {
        Self { term: 1.0, sum: 1.0, abs_sum: 1.0, ln_scale: 0.0, terms: 1 }
    }

    fn advance(&mut self, ratio: f64) {
        self.term *= ratio;
        if self.term.abs() > RESCALE_ABOVE {
            self.term /= RESCALE_ABOVE;
            self.sum /= RESCALE_ABOVE;
            self.abs_sum /= RESCALE_ABOVE;
            self.ln_scale += RESCALE_LN;
        }
        self.sum += self.term;
        self.abs_sum += self.term.abs();
        self.terms += 1;
    }

    fn finish(self, tail_bound: f64) -> SeriesSum {
        SeriesSum {
            value: self.sum,
            abs_sum: self.abs_sum,
            ln_scale: self.ln_scale,
            terms: self.terms,
            tail_bound,
        }
    }
}

/// Finite sum `sum_{k=0}^{last} t_k` with `t_0 = 1` and `t_{k+1} = t_k ratio(k)`.
///
/// Stops early once a ratio is exactly zero (a vanishing numerator factor).
pub fn sum_by_ratio<F: FnMut(usize) -> f64>(mut ratio: F, last: usize) -> SeriesSum {
    let mut acc = Accumulator::new();
    for k in 0..last {
        let r = ratio(k);
        if r == 0.0 {
            break;
        }
        acc.advance(r);
    }
    acc.finish(0.0)
}

/// Same as [`sum_by_ratio`] but with a first term other than one.
pub fn sum_by_ratio_from<F: FnMut(usize) -> f64>(first: LogMag, ratio: F, last: usize) -> SeriesSum {
    let mut s = sum_by_ratio(ratio, last);
    if first.is_zero() {
        return SeriesSum { value: 0.0, abs_sum: 0.0, ln_scale: 0.0, terms: s.terms, tail_bound: 0.0 };
    }
    s.value *= first.sign;
    s.ln_scale += first.ln_abs;
    s
}

fn phi_ratio(numer: &[f64], denom: &[f64], q: f64, z: f64, excess: i32, k: usize) -> f64 {
    let qk = q.powi(k as i32);
    let mut r = z;
    for &a in numer {
        let f = snapped_factor(1.0 - a * qk);
        if f == 0.0 {
            return 0.0;
        }
        r *= f;
    }
    for &b in denom {
        r /= 1.0 - b * qk;
    }
    r /= 1.0 - qk * q;
    if excess != 0 {
        r *= (-qk).powi(excess);
    }
    r
}

/// Basic hypergeometric series `rφs(numer; denom; q, z)` with its summation record.
pub fn phi_detailed(
    numer: &[f64],
    denom: &[f64],
    z: f64,
    term: SeriesTermination,
    ctx: &QContext,
) -> Result<SeriesSum> {
    let q = ctx.q;
    let excess = 1 + denom.len() as i32 - numer.len() as i32;
    if z == 0.0 {
        return Ok(SeriesSum::unit());
    }
    let natural = numer.iter().filter_map(|&a| terminating_index(a, q)).min();
    let last = match term {
        SeriesTermination::Terminating(n) => {
            if !numer.iter().any(|&a| (a * q.powi(n as i32) - 1.0).abs() <= TERMINATION_TOL) {
                return Err(QError::InvalidInput(format!(
                    "terminating sum of order {n} requested but no numerator equals q^-{n}"
                )));
            }
            Some(n)
        }
        SeriesTermination::Adaptive => natural,
    };

    if let Some(last) = last {
        check_poles(denom, q, last)?;
        return Ok(sum_by_ratio(|k| phi_ratio(numer, denom, q, z, excess, k), last));
    }

    if excess < 0 {
        return Err(QError::DivergentSeries { terms: 0 });
    }
    adaptive_phi(numer, denom, z, excess, ctx)
}

fn check_poles(denom: &[f64], q: f64, last: usize) -> Result<()> {
    for k in 0..last {
        let qk = q.powi(k as i32);
        if denom.iter().any(|&b| (1.0 - b * qk).abs() <= ZERO_FACTOR_TOL) {
            return Err(QError::PoleInDenominator { index: k });
        }
    }
    Ok(())
}

/// Bound on `|t_{j+1}/t_j|` valid for every `j >= k`, or `None` if not yet available.
fn ratio_bound(numer: &[f64], denom: &[f64], q: f64, z: f64, excess: i32, k: usize) -> Option<f64> {
    let qk = q.powi(k as i32);
    let mut r = z.abs() * qk.powi(excess);
    for &a in numer {
        r *= 1.0 + a.abs() * qk;
    }
    for &b in denom {
        let d = 1.0 - b.abs() * qk;
        if d <= 0.0 {
            return None;
        }
        r /= d;
    }
    r /= 1.0 - qk * q;
    Some(r)
}

fn adaptive_phi(numer: &[f64], denom: &[f64], z: f64, excess: i32, ctx: &QContext) -> Result<SeriesSum> {
    let q = ctx.q;
    let mut acc = Accumulator::new();
    let mut small_run = 0usize;
    for k in 0..ctx.max_terms {
        let qk = q.powi(k as i32);
        if denom.iter().any(|&b| (1.0 - b * qk).abs() <= ZERO_FACTOR_TOL) {
            return Err(QError::PoleInDenominator { index: k });
        }
        let r = phi_ratio(numer, denom, q, z, excess, k);
        let prev = acc.term;
        acc.advance(r);
        let next = acc.term;
        let scale = acc.sum.abs().max(ctx.min_subnormal_guard);
        if next.abs() <= ctx.eps * scale || next.abs() < ctx.min_subnormal_guard {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            if let Some(bound) = ratio_bound(numer, denom, q, z, excess, k + 1) {
                if bound < 1.0 {
                    let tail = next.abs() * bound / (1.0 - bound);
                    if tail <= ctx.eps * scale || next.abs() < ctx.min_subnormal_guard {
                        return Ok(acc.finish(tail));
                    }
                }
            }
        }
        if next.abs() > prev.abs() && k > ctx.max_terms / 2 {
            return Err(QError::DivergentSeries { terms: acc.terms });
        }
    }
    match ratio_bound(numer, denom, q, z, excess, ctx.max_terms) {
        Some(b) if b < 1.0 => Err(QError::TermCapExceeded { cap: ctx.max_terms }),
        _ => Err(QError::DivergentSeries { terms: ctx.max_terms }),
    }
}

/// `rφs(numer; denom; q, z)` with the standard `[(-1)^k q^{k(k-1)/2}]^{1+s-r}` factor.
pub fn phi(numer: &[f64], denom: &[f64], z: f64, term: SeriesTermination, ctx: &QContext) -> Result<f64> {
    Ok(phi_detailed(numer, denom, z, term, ctx)?.to_f64())
}

/// Jackson's q-exponential `E_q(z) = (-z;q)_inf`.
pub fn qexp_e(z: f64, ctx: &QContext) -> Result<f64> {
    qpoch_inf(-z, ctx)
}

/// Series form `sum_n q^{n(n-1)/2} z^n / (q;q)_n` of [`qexp_e`].
pub fn qexp_e_series(z: f64, ctx: &QContext) -> Result<f64> {
    phi(&[], &[], -z, SeriesTermination::Adaptive, ctx)
}

/// Sum of an arbitrary term sequence, stopped by the consecutive-small-terms
/// rule plus a geometric tail estimate from the last two terms.
pub fn adaptive_sum<F: FnMut(usize) -> Result<f64>>(mut term: F, ctx: &QContext) -> Result<SeriesSum> {
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut prev = f64::NAN;
    let mut small_run = 0usize;
    for k in 0..ctx.max_terms {
        let t = term(k)?;
        sum += t;
        abs_sum += t.abs();
        let scale = sum.abs().max(ctx.min_subnormal_guard);
        if t.abs() <= ctx.eps * scale || t.abs() < ctx.min_subnormal_guard {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            let tail = if t == 0.0 {
                0.0
            } else {
                let rho = (t / prev).abs();
                if rho < 1.0 { t.abs() * rho / (1.0 - rho) } else { f64::INFINITY }
            };
            if tail <= ctx.eps * scale || t.abs() < ctx.min_subnormal_guard {
                return Ok(SeriesSum { value: sum, abs_sum, ln_scale: 0.0, terms: k + 1, tail_bound: tail });
            }
        }
        prev = t;
    }
    Err(QError::TermCapExceeded { cap: ctx.max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    #[test]
    fn context_rejects_bad_base() {
        assert!(QContext::new(0.0).is_err());
        assert!(QContext::new(1.0).is_err());
        assert!(QContext::new(-0.2).is_err());
        assert!(QContext::with_settings(0.5, 0.0, 10, 0.0).is_err());
        assert!(QContext::with_settings(0.5, 1e-12, 0, 0.0).is_err());
    }

    #[test]
    fn qpoch_examples() {
        assert_eq!(qpoch(0.7, 0.5, 0), 1.0);
        assert_relative_eq!(qpoch(0.5, 0.5, 2), 0.375);
        assert_eq!(qpoch(1.0, 0.5, 3), 0.0);
    }

    #[test]
    fn qpoch_inf_examples() {
        let c = ctx(0.5);
        assert_eq!(qpoch_inf(0.0, &c).unwrap(), 1.0);
        assert_eq!(qpoch_inf(1.0, &c).unwrap(), 0.0);
        let brute: f64 = (0..500).map(|j| 1.0 - 0.5 * 0.5f64.powi(j)).product();
        assert_relative_eq!(qpoch_inf(0.5, &c).unwrap(), brute, max_relative = 1e-14);
    }

    #[test]
    fn qpoch_inf_hits_term_cap() {
        let c = QContext::with_settings(0.99, 1e-16, 5, 0.0).unwrap();
        assert_eq!(qpoch_inf(0.5, &c), Err(QError::TermCapExceeded { cap: 5 }));
    }

    #[test]
    fn qpoch_multi_examples() {
        let c = ctx(0.5);
        assert_eq!(qpoch_multi(&[0.0, 0.0], Count::Infinite, &c).unwrap(), 1.0);
        assert_relative_eq!(qpoch_multi(&[0.5], Count::Finite(2), &c).unwrap(), 0.375);
        let two = qpoch(0.2, 0.5, 2) * qpoch(0.3, 0.5, 2);
        assert_relative_eq!(qpoch_multi(&[0.2, 0.3], Count::Finite(2), &c).unwrap(), two);
        assert!(qpoch_multi(&[], Count::Finite(2), &c).is_err());
    }

    #[test]
    fn phi_examples() {
        let c = ctx(0.5);
        let v = phi(&[1.0, 0.3], &[0.7], 0.4, SeriesTermination::Adaptive, &c).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(phi(&[0.3, 0.2], &[0.6], 0.0, SeriesTermination::Adaptive, &c).unwrap(), 1.0);

        let (a, b, q) = (0.2, 0.1, 0.5);
        let v = phi(&[2.0, a * b * q * q], &[a * q], q, SeriesTermination::Terminating(1), &c).unwrap();
        let closed = qpoch(b * q, q, 1) / qpoch(a * q, q, 1) * (-a) * q;
        assert_relative_eq!(v, closed, max_relative = 1e-13);
    }

    #[test]
    fn phi_terminating_requires_matching_numerator() {
        let c = ctx(0.5);
        let err = phi(&[0.3], &[0.2], 0.5, SeriesTermination::Terminating(2), &c);
        assert!(matches!(err, Err(QError::InvalidInput(_))));
    }

    #[test]
    fn phi_detects_pole() {
        let c = ctx(0.5);
        // denominator q^{-1} vanishes at k = 1 before the q^{-3} numerator terminates
        let err = phi(&[8.0], &[2.0], 0.3, SeriesTermination::Terminating(3), &c);
        assert_eq!(err, Err(QError::PoleInDenominator { index: 1 }));
    }

    #[test]
    fn phi_nonterminating_negative_excess_diverges() {
        let c = ctx(0.5);
        let err = phi(&[0.3, 0.4, 0.2], &[], 0.1, SeriesTermination::Adaptive, &c);
        assert!(matches!(err, Err(QError::DivergentSeries { .. })));
    }

    #[test]
    fn phi_q_binomial_theorem() {
        let c = ctx(0.5);
        let (a, z) = (0.3, 0.6);
        let lhs = phi(&[a], &[], z, SeriesTermination::Adaptive, &c).unwrap();
        let rhs = qpoch_inf(a * z, &c).unwrap() / qpoch_inf(z, &c).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
    }

    #[test]
    fn qexp_examples() {
        let c = ctx(0.5);
        assert_eq!(qexp_e(0.0, &c).unwrap(), 1.0);
        assert_eq!(qexp_e(-1.0, &c).unwrap(), 0.0);
        assert_relative_eq!(qexp_e(0.3, &c).unwrap(), qexp_e_series(0.3, &c).unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn log_forms_agree() {
        let c = ctx(0.3);
        assert_relative_eq!(qpoch_ln(-0.4, 0.3, 9).to_f64(), qpoch(-0.4, 0.3, 9), max_relative = 1e-14);
        assert_relative_eq!(qpoch_inf_ln(0.7, &c).unwrap().to_f64(), qpoch_inf(0.7, &c).unwrap());
        let big = qpoch_ln(1e3, 0.5, 3).to_f64();
        assert_relative_eq!(big, (1.0 - 1e3) * (1.0 - 5e2) * (1.0 - 2.5e2), max_relative = 1e-14);
    }

    #[test]
    fn rescaled_sum_keeps_magnitude() {
        let s = sum_by_ratio(|_| 1e100, 5);
        assert_relative_eq!(s.log_mag().ln_abs, 500.0 * 10f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn adaptive_sum_geometric() {
        let c = ctx(0.5);
        let s = adaptive_sum(|k| Ok(0.5f64.powi(k as i32)), &c).unwrap();
        assert_relative_eq!(s.value, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn terminating_index_detection() {
        assert_eq!(terminating_index(8.0, 0.5), Some(3));
        assert_eq!(terminating_index(1.0, 0.5), Some(0));
        assert_eq!(terminating_index(7.9, 0.5), None);
        assert_eq!(terminating_index(-8.0, 0.5), None);
    }
}
