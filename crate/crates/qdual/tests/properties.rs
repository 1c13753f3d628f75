use proptest::prelude::*;

use qdual::families::{eval_pair, eval_rec, eval_series, eval_series_at, Branch, DualPair, FamilyId, Params, Point};
use qdual::identities::{check, IdentityId, ParamMap};
use qdual::jacobi::{build, coeffs, eig, OperatorKind, OperatorTag};
use qdual::ortho_duality::{OrthoSpec, RelationId};
use qdual::qkernel::{qpoch, qpoch_inf, QContext};

fn ctx(q: f64) -> QContext {
    QContext::new(q).unwrap()
}

/// Scale of a product of `(1 - a q^j)` factors, used for relative tolerances.
fn poch_scale(a: f64, q: f64, n: usize) -> f64 {
    (0..n).map(|j| 1.0 + a.abs() * q.powi(j as i32)).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qpoch_splits_at_any_index(a in -2.0..2.0f64, q in 0.05..0.95f64, m in 0usize..15, n in 0usize..15) {
        let whole = qpoch(a, q, m + n);
        let split = qpoch(a, q, m) * qpoch(a * q.powi(m as i32), q, n);
        prop_assert!((whole - split).abs() <= 1e-12 * poch_scale(a, q, m + n));
    }

    #[test]
    fn qpoch_steps_by_one_factor(a in -2.0..2.0f64, q in 0.05..0.95f64, n in 0usize..30) {
        let next = qpoch(a, q, n + 1);
        let stepped = qpoch(a, q, n) * (1.0 - a * q.powi(n as i32));
        prop_assert!((next - stepped).abs() <= 1e-13 * poch_scale(a, q, n + 1));
    }

    #[test]
    fn infinite_product_splits(a in -1.5..1.5f64, q in 0.1..0.9f64, n in 0usize..12) {
        let c = ctx(q);
        let whole = qpoch_inf(a, &c).unwrap();
        let split = qpoch(a, q, n) * qpoch_inf(a * q.powi(n as i32), &c).unwrap();
        prop_assert!((whole - split).abs() <= 1e-11 * whole.abs().max(1.0));
    }

    #[test]
    fn little_q_jacobi_series_matches_recurrence(
        a in 0.05..0.95f64, b in -0.9..0.9f64, q in 0.2..0.7f64, n in 0usize..8, x in -1.0..0.0f64,
    ) {
        let c = ctx(q);
        let p = Params::ab(a, b);
        let s = eval_series(FamilyId::LittleQJacobi, &p, n, x, &c).unwrap();
        let r = eval_rec(FamilyId::LittleQJacobi, &p, n, x, &c).unwrap();
        prop_assert!((s - r).abs() <= 1e-10 * s.abs().max(1.0), "series {} recurrence {}", s, r);
    }

    #[test]
    fn discrete_q_ultraspherical_has_parity(a in 0.1..1.5f64, q in 0.2..0.7f64, n in 0usize..10, x in -1.5..1.5f64) {
        let c = ctx(q);
        let p = Params::a(a);
        let plus = eval_series(FamilyId::DiscreteQUltra, &p, n, x, &c).unwrap();
        let minus = eval_series(FamilyId::DiscreteQUltra, &p, n, -x, &c).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((minus - sign * plus).abs() <= 1e-10 * plus.abs().max(1.0));
    }

    #[test]
    fn little_q_jacobi_operator_is_favard_positive(a in 0.05..1.9f64, b in -1.0..1.9f64, q in 0.2..0.5f64) {
        prop_assume!(a * q < 0.95 && b * q < 0.95);
        let kind = OperatorKind::new(OperatorTag::I1, Params::ab(a, b), q).unwrap();
        for n in 0..30 {
            let (off, _) = coeffs(&kind, n).unwrap();
            prop_assert!(off > 0.0);
        }
    }

    #[test]
    fn eigenvalues_preserve_the_trace(a in 0.05..0.95f64, b in 0.05..0.95f64, q in 0.2..0.7f64, size in 2usize..30) {
        let kind = OperatorKind::new(OperatorTag::I1, Params::ab(a, b), q).unwrap();
        let op = build(&kind, size).unwrap();
        let trace: f64 = op.diag.iter().sum();
        let spectrum: f64 = eig(&op).unwrap().iter().sum();
        prop_assert!((trace - spectrum).abs() <= 1e-12 * trace.abs().max(1.0));
    }

    #[test]
    fn little_q_jacobi_weights_are_positive(a in 0.05..1.9f64, b in -1.0..1.9f64, q in 0.2..0.5f64, j in 0i64..40) {
        prop_assume!(a * q < 0.95 && b * q < 0.95);
        let spec = OrthoSpec::new(RelationId::LittleQJacobi, Params::ab(a, b), q).unwrap();
        prop_assert!(spec.weight(j, Branch::Unit).unwrap() > 0.0);
    }

    #[test]
    fn duality_factor_links_both_readings(a in 0.05..0.95f64, b in 0.05..0.95f64, q in 0.3..0.6f64, m in 0usize..5, n in 0usize..5) {
        let c = ctx(q);
        let p = Params::ab(a, b);
        let pair = DualPair::LittleQJacobi;
        let v = eval_pair(pair, &p, m, n, &c).unwrap();
        let x = pair.point(&p, n, q).unwrap();
        let direct = eval_series_at(FamilyId::LittleQJacobi, &p, m, Point::X(x), &c).unwrap().to_f64();
        let via_dual = (pair.prefactor(&p, m, n, q) * v.dual).to_f64();
        prop_assert!((direct - via_dual).abs() <= 1e-10 * direct.abs().max(1.0));
    }

    #[test]
    fn q_binomial_theorem_holds_across_its_domain(a in -1.9..1.9f64, b in -2.0..2.0f64, q in 0.1..0.5f64) {
        let params: ParamMap = [("a".to_string(), a), ("b".to_string(), b)].into_iter().collect();
        let rep = check(IdentityId::QBinomial, &params, &ctx(q)).unwrap();
        prop_assert!(rep.pass, "residual {}", rep.residual);
    }
}
