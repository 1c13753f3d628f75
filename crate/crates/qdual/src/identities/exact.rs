//! Exact rational evaluation of finite sums whose terms cancel to many
//! orders of magnitude. Every `f64` is a dyadic rational, so the sums are
//! computed exactly from the given parameter values and rounded once.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{QError, Result};

pub(super) fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| QError::InvalidInput(format!("{x} is not a finite number")))
}

pub(super) fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn qpoch(a: &BigRational, q: &BigRational, n: usize) -> BigRational {
    let mut out = BigRational::one();
    let mut qj = BigRational::one();
    for _ in 0..n {
        out *= BigRational::one() - a * &qj;
        qj *= q;
    }
    out
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Rational powers of a fixed base, so parameters like `q^-7` or `a q^8`
/// are formed without rounding.
pub(super) struct ExactBase {
    q: BigRational,
}

impl ExactBase {
    pub(super) fn new(q: f64) -> Result<Self> {
        Ok(Self { q: rational(q)? })
    }

    pub(super) fn pow(&self, e: i64) -> BigRational {
        let p = pow(&self.q, e.unsigned_abs() as usize);
        if e < 0 { p.recip() } else { p }
    }

    /// `sum_{j<=n} (b_1,...,b_r; q)_j / ((pair_square; q^2)_j (q; q)_j) q^j`, the
    /// `r phi 2` whose denominators `+-sqrt(pair_square)` are merged into one
    /// base-`q^2` factor.
    pub(super) fn quadratic_phi(&self, numer: &[BigRational], pair_square: &BigRational, n: usize) -> Result<f64> {
        let q2 = &self.q * &self.q;
        let mut total = BigRational::zero();
        for j in 0..=n {
            let den = qpoch(pair_square, &q2, j) * qpoch(&self.q, &self.q, j);
            if den.is_zero() {
                return Err(QError::PoleInDenominator { index: j });
            }
            let mut term = pow(&self.q, j) / den;
            for b in numer {
                term *= qpoch(b, &self.q, j);
            }
            total += term;
        }
        Ok(to_f64(&total))
    }
}

/// `sum_{n < terms} (-1)^n q^(n(n-1)/2) (1-aq^(2n+1))/(1-aq) (aq;q)_n/(q;q)_n (q^-n + aq^(n+1))^k`.
pub(super) fn eta_partial(a: f64, q: f64, k: usize, terms: usize) -> Result<f64> {
    let (a, q) = (rational(a)?, rational(q)?);
    let one = BigRational::one();
    let aq = &a * &q;
    let mut total = BigRational::zero();
    let mut qn = one.clone();
    let mut gauss = one.clone();
    let mut ratio = one.clone();
    for n in 0..terms {
        let mu = one.clone() / &qn + &aq * &qn;
        let term = &gauss * (&one - &aq * &qn * &qn) / (&one - &aq) * &ratio * pow(&mu, k);
        if n % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        ratio *= (&one - &aq * &qn) / (&one - &q * &qn);
        gauss *= &qn;
        qn *= &q;
    }
    Ok(to_f64(&total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_phi_terminates_at_the_q_power() {
        // 1phi0-type check: with a single numerator q^-n the sum has n+1 terms
        // and the value does not change when more are requested.
        let base = ExactBase::new(0.5).unwrap();
        let numer = [base.pow(-3), rational(0.3).unwrap()];
        let ps = rational(0.2).unwrap();
        let a = base.quadratic_phi(&numer, &ps, 3).unwrap();
        let b = base.quadratic_phi(&numer, &ps, 6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn eta_zero_vanishes_exactly_up_to_truncation() {
        assert!(eta_partial(0.4, 0.5, 0, 40).unwrap().abs() < 1e-100);
    }
}
