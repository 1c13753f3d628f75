use super::{eval_series, FamilyId, Params};
use crate::error::{QError, Result};
use crate::qkernel::QContext;

/// Residual of the second-order q-difference equation of a primal family.
///
/// Each side is assembled from the series values at `x/q`, `x` and `qx`; the
/// returned value is `|lhs - rhs| / max(1, largest term)`.
pub fn qdiff_residual(fid: FamilyId, p: &Params, n: usize, x: f64, ctx: &QContext) -> Result<f64> {
    use FamilyId::*;
    let q = ctx.q();
    if x == 0.0 {
        return Err(QError::InvalidInput("q-difference equations need x != 0".into()));
    }
    if !matches!(fid, LittleQJacobi | BigQJacobi | BigQLaguerre | AltQCharlier | AlSalamCarlitzI | LittleQLaguerre) {
        return Err(QError::UnsupportedFamily(fid.slug().into()));
    }
    let up = eval_series(fid, p, n, q * x, ctx)?;
    let mid = eval_series(fid, p, n, x, ctx)?;
    let down = eval_series(fid, p, n, x / q, ctx)?;
    let (a, b, c, l) = (p.a, p.b, p.c, x);
    let qn = q.powi(n as i32);
    let qmn = 1.0 / qn;
    let terms: Vec<f64> = match fid {
        LittleQJacobi => vec![
            (qmn + a * b * qn * q) * mid,
            -(a / l) * (b * q * l - 1.0) * up,
            -(1.0 + a) / l * mid,
            -(l - 1.0) / l * down,
        ],
        BigQJacobi => vec![
            (qmn + a * b * qn * q) * mid,
            -a * q / (l * l) * (l - 1.0) * (b * l - c) * up,
            (a * c * q * (1.0 + q) / (l * l) - q * (a * b + a * c + a + c) / l) * mid,
            -(l - a * q) * (l - c * q) / (l * l) * down,
        ],
        BigQLaguerre => {
            let bb = a * b * q * (1.0 - l);
            let dd = (l - a * q) * (l - b * q);
            vec![qmn * (1.0 - qn) * l * l * mid, -bb * up, (bb + dd) * mid, -dd * down]
        }
        AltQCharlier => vec![(qmn - a * qn) * mid, a * up, -mid / l, (1.0 - l) / l * down],
        AlSalamCarlitzI => {
            let dl = a / (l * l) * (1.0 + 1.0 / q - l - l / a);
            vec![
                qmn * mid,
                -a / (q * l * l) * up,
                dl * mid,
                -a / (l * l) * (1.0 - l) * (1.0 - l / a) * down,
            ]
        }
        LittleQLaguerre => vec![qmn * l * mid, a * up, -(1.0 + a) * mid, (1.0 - l) * down],
        _ => unreachable!(),
    };
    let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
    Ok(terms.iter().sum::<f64>().abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        let ctx = QContext::new(0.5).unwrap();
        let r = qdiff_residual(FamilyId::LittleQJacobi, &Params::ab(0.2, 0.1), 4, 0.25, &ctx).unwrap();
        assert!(r <= 1e-11, "{r}");
        let r = qdiff_residual(FamilyId::AltQCharlier, &Params::a(1.0), 0, 1.0, &ctx).unwrap();
        assert!(r <= 1e-15, "{r}");
        let r = qdiff_residual(FamilyId::BigQLaguerre, &Params::ab(0.5, -0.4), 3, 0.125, &ctx).unwrap();
        assert!(r <= 1e-11, "{r}");
    }

    #[test]
    fn duals_are_unsupported() {
        let ctx = QContext::new(0.5).unwrap();
        let e = qdiff_residual(FamilyId::QCharlier, &Params::a(1.0), 2, 0.5, &ctx);
        assert!(matches!(e, Err(QError::UnsupportedFamily(_))));
    }
}
