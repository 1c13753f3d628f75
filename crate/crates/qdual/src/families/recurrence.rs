use serde::Serialize;

use super::{FamilyId, Params};
use crate::error::Result;
use crate::qkernel::QContext;

/// Coefficients of `L p_n = A p_{n+1} + B p_n + C p_{n-1}`.
///
/// `L` is `x` for primal families, `mu` for the quadratic-lattice duals and
/// `q^{-x}` for q-Meixner, q-Charlier and Al-Salam-Carlitz II.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

fn qp(q: f64, e: i64) -> f64 {
    q.powi(e as i32)
}

fn little_jacobi(n: i64, a: f64, b: f64, q: f64) -> RecCoeffs {
    let ab = a * b;
    let an = qp(q, n) * (1.0 - a * qp(q, n + 1)) * (1.0 - ab * qp(q, n + 1))
        / ((1.0 - ab * qp(q, 2 * n + 1)) * (1.0 - ab * qp(q, 2 * n + 2)));
    let cn = a * qp(q, n) * (1.0 - qp(q, n)) * (1.0 - b * qp(q, n))
        / ((1.0 - ab * qp(q, 2 * n)) * (1.0 - ab * qp(q, 2 * n + 1)));
    RecCoeffs { a: -an, b: an + cn, c: -cn }
}

fn big_jacobi(n: i64, a: f64, b: f64, c: f64, q: f64) -> RecCoeffs {
    let ab = a * b;
    let an = (1.0 - a * qp(q, n + 1)) * (1.0 - c * qp(q, n + 1)) * (1.0 - ab * qp(q, n + 1))
        / ((1.0 - ab * qp(q, 2 * n + 1)) * (1.0 - ab * qp(q, 2 * n + 2)));
    let cn = -a * c * qp(q, n + 1) * (1.0 - qp(q, n)) * (1.0 - b * qp(q, n)) * (1.0 - ab * qp(q, n) / c)
        / ((1.0 - ab * qp(q, 2 * n)) * (1.0 - ab * qp(q, 2 * n + 1)));
    RecCoeffs { a: an, b: 1.0 - an - cn, c: cn }
}

fn q_meixner(n: i64, alpha: f64, c: f64, q: f64) -> RecCoeffs {
    let up = c * (1.0 - alpha * qp(q, n + 1));
    let down = (1.0 - qp(q, n)) * (c + qp(q, n));
    RecCoeffs {
        a: -qp(q, -2 * n - 1) * up,
        b: 1.0 + qp(q, -2 * n - 1) * (up + q * down),
        c: -qp(q, -2 * n) * down,
    }
}

/// Recurrence coefficients of degree `n`.
pub fn rec_coeffs(fid: FamilyId, p: &Params, n: usize, q: f64) -> Result<RecCoeffs> {
    use FamilyId::*;
    fid.validate(p, q)?;
    let n = n as i64;
    let (a, b, c) = (p.a, p.b, p.c);
    let r = match fid {
        LittleQJacobi => little_jacobi(n, a, b, q),
        DualLittleQJacobi => RecCoeffs {
            a: -a * qp(q, -n) * (1.0 - b * qp(q, n + 1)),
            b: qp(q, -n) * (1.0 + a),
            c: -qp(q, -n) * (1.0 - qp(q, n)),
        },
        BigQJacobi => big_jacobi(n, a, b, c, q),
        DualBigQJacobi => {
            let da = qp(q, -2 * n - 1) * (1.0 - a * qp(q, n + 1)) * (c / a - b * qp(q, n + 1));
            let dc = qp(q, -2 * n) * (1.0 - qp(q, n)) * (c / a - qp(q, n));
            RecCoeffs { a: da, b: 1.0 + a * b * q - da - dc, c: dc }
        }
        DiscreteQUltra => {
            let an = (1.0 - a * qp(q, n + 1)) / (1.0 - a * qp(q, 2 * n + 1));
            RecCoeffs { a: an, b: 0.0, c: 1.0 - an }
        }
        DiscreteQUltraTilde => {
            let an = (1.0 + a * qp(q, n + 1)) / (1.0 + a * qp(q, 2 * n + 1));
            RecCoeffs { a: an, b: 0.0, c: an - 1.0 }
        }
        DualDiscreteQUltra | DualDiscreteQUltraTilde => {
            let aa = if fid == DualDiscreteQUltra { a } else { -a };
            RecCoeffs {
                a: -qp(q, -2 * n - 1) * (1.0 - aa * qp(q, 2 * n + 2)),
                b: qp(q, -2 * n - 1) * (1.0 + q),
                c: -qp(q, -2 * n) * (1.0 - qp(q, 2 * n)),
            }
        }
        BigQLaguerre => RecCoeffs {
            a: (1.0 - a * qp(q, n + 1)) * (1.0 - b * qp(q, n + 1)),
            b: -a * b * qp(q, 2 * n + 1) * (1.0 + q) + qp(q, n + 1) * (a + a * b + b),
            c: -a * b * qp(q, n + 1) * (1.0 - qp(q, n)),
        },
        QMeixner => q_meixner(n, a, b, q),
        QCharlier => q_meixner(n, 0.0, a, q),
        AltQCharlier => {
            let an = qp(q, n) * (1.0 + a * qp(q, n)) / ((1.0 + a * qp(q, 2 * n)) * (1.0 + a * qp(q, 2 * n + 1)));
            let cn = a * qp(q, 2 * n - 1) * (1.0 - qp(q, n))
                / ((1.0 + a * qp(q, 2 * n - 1)) * (1.0 + a * qp(q, 2 * n)));
            RecCoeffs { a: -an, b: an + cn, c: -cn }
        }
        DualAltQCharlier => RecCoeffs { a: -a, b: qp(q, -n), c: -qp(q, -n) * (1.0 - qp(q, n)) },
        AlSalamCarlitzI => RecCoeffs {
            a: 1.0,
            b: (a + 1.0) * qp(q, n),
            c: -a * qp(q, n - 1) * (1.0 - qp(q, n)),
        },
        AlSalamCarlitzII => RecCoeffs {
            a: 1.0,
            b: (a + 1.0) * qp(q, -n),
            c: a * qp(q, -2 * n + 1) * (1.0 - qp(q, n)),
        },
        LittleQLaguerre => RecCoeffs {
            a: -qp(q, n) * (1.0 - a * qp(q, n + 1)),
            b: qp(q, n) - a * qp(q, 2 * n + 1) + a * qp(q, n) - a * qp(q, 2 * n),
            c: -a * qp(q, n) * (1.0 - qp(q, n)),
        },
        BilateralASC => {
            // u_n(x) = d_n(2qx/t1) with dual little q-Jacobi parameters t2/t1, -q/(t1 t2)
            let a1 = p.t2 / p.t1;
            let b1 = -q / (p.t1 * p.t2);
            let s = p.t1 / (2.0 * q);
            RecCoeffs {
                a: s * (-a1 * qp(q, -n) * (1.0 - b1 * qp(q, n + 1))),
                b: s * qp(q, -n) * (1.0 + a1),
                c: s * (-qp(q, -n) * (1.0 - qp(q, n))),
            }
        }
    };
    Ok(r)
}

/// Forward three-term recursion from `p_0 = 1`.
pub fn eval_rec(fid: FamilyId, p: &Params, n: usize, x: f64, ctx: &QContext) -> Result<f64> {
    let q = ctx.q();
    fid.validate(p, q)?;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let r = rec_coeffs(fid, p, k, q)?;
        let next = ((x - r.b) * cur - if k == 0 { 0.0 } else { r.c * prev }) / r.a;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_ultra_degree_zero() {
        let r = rec_coeffs(FamilyId::DiscreteQUltra, &Params::a(0.5), 0, 0.5).unwrap();
        assert!((r.a - 1.0).abs() < 1e-15);
        assert_eq!(r.c, 0.0);
    }

    #[test]
    fn dual_alt_charlier_coefficients() {
        let q = 0.5;
        let r = rec_coeffs(FamilyId::DualAltQCharlier, &Params::a(1.0), 1, q).unwrap();
        assert_eq!(r.a, -1.0);
        assert!((r.b - 1.0 / q).abs() < 1e-15);
        assert!((r.c + (1.0 - q) / q).abs() < 1e-15);
    }

    #[test]
    fn favard_positivity_little_jacobi() {
        let p = Params::ab(0.2, 0.1);
        for n in 0..50 {
            let r0 = rec_coeffs(FamilyId::LittleQJacobi, &p, n, 0.5).unwrap();
            let r1 = rec_coeffs(FamilyId::LittleQJacobi, &p, n + 1, 0.5).unwrap();
            assert!(r0.a * r1.c > 0.0);
        }
    }
}
