use super::ResidualReport;
use crate::error::{QError, Result};
use crate::families::Params;

/// Tolerance for the input orthogonality that the dual relation is derived from.
const INPUT_TOLERANCE: f64 = 1e-10;

/// Finite-support duality: given `values[m][n] = p_n(x_m)`, point masses
/// `w_m` and dual weights `v_n` with
/// `sum_m p_n(x_m) p_n'(x_m) w_m = delta v_n^{-1} sum_s w_s`,
/// checks that the rows of `a_mn = sqrt(w_m v_n / sum_s w_s) p_n(x_m)` are
/// orthonormal, which is the dual relation `sum_n p_n(x_m) p_n(x_m') v_n = delta ...`.
pub fn finite_dual_check(values: &[Vec<f64>], w: &[f64], v: &[f64], tol: f64) -> Result<ResidualReport> {
    let size = values.len();
    if size == 0 || w.len() != size || v.len() != size || values.iter().any(|row| row.len() != size) {
        return Err(QError::InvalidInput("finite duality needs a square system with matching weights".into()));
    }
    let total: f64 = w.iter().sum();

    let mut input_residual: f64 = 0.0;
    for n in 0..size {
        for n2 in n..size {
            let s: f64 = (0..size).map(|m| values[m][n] * values[m][n2] * w[m]).sum();
            let scale = total / (v[n] * v[n2]).sqrt();
            let target = if n == n2 { total / v[n] } else { 0.0 };
            input_residual = input_residual.max((s - target).abs() / scale);
        }
    }
    if input_residual > INPUT_TOLERANCE {
        return Err(QError::InputNotOrthogonal { residual: input_residual });
    }

    let a: Vec<Vec<f64>> = (0..size)
        .map(|m| (0..size).map(|n| (w[m] * v[n] / total).sqrt() * values[m][n]).collect())
        .collect();
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    for m in 0..size {
        for m2 in m..size {
            let s: f64 = (0..size).map(|n| a[m][n] * a[m2][n]).sum();
            if m == m2 {
                diag = diag.max((s - 1.0).abs());
            } else {
                off = off.max(s.abs());
            }
        }
    }
    Ok(ResidualReport::new(
        "finite-duality".into(),
        "dual orthogonality of a finite orthogonal system",
        Params::default(),
        f64::NAN,
        vec![size],
        off,
        diag,
        0.0,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_system() {
        let rep = finite_dual_check(&[vec![1.0]], &[3.0], &[1.0], 1e-14).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn two_point_system() {
        // x = {0, 1}, w = {1, 1}, p_1(x) = 2x - 1.
        let values = vec![vec![1.0, -1.0], vec![1.0, 1.0]];
        let rep = finite_dual_check(&values, &[1.0, 1.0], &[1.0, 1.0], 1e-14).unwrap();
        assert!(rep.residual <= 1e-14);
    }

    #[test]
    fn krawtchouk_like_system() {
        // Orthogonalize monomials on five points by Gram-Schmidt and read off v_n.
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let w = [1.0, 4.0, 6.0, 4.0, 1.0];
        let total: f64 = w.iter().sum();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for k in 0..5 {
            let mut p: Vec<f64> = x.iter().map(|&t: &f64| t.powi(k)).collect();
            for b in &basis {
                let num: f64 = (0..5).map(|m| p[m] * b[m] * w[m]).sum();
                let den: f64 = (0..5).map(|m| b[m] * b[m] * w[m]).sum();
                for m in 0..5 {
                    p[m] -= num / den * b[m];
                }
            }
            basis.push(p);
        }
        let v: Vec<f64> = basis.iter().map(|b| total / (0..5).map(|m| b[m] * b[m] * w[m]).sum::<f64>()).collect();
        let values: Vec<Vec<f64>> = (0..5).map(|m| (0..5).map(|n| basis[n][m]).collect()).collect();
        let rep = finite_dual_check(&values, &w, &v, 1e-12).unwrap();
        assert!(rep.pass, "{}", rep.residual);
    }

    #[test]
    fn non_orthogonal_input_is_rejected() {
        let values = vec![vec![1.0, 0.0], vec![1.0, 1.0]];
        let err = finite_dual_check(&values, &[1.0, 1.0], &[1.0, 1.0], 1e-12).unwrap_err();
        assert!(matches!(err, QError::InputNotOrthogonal { .. }));
    }
}
