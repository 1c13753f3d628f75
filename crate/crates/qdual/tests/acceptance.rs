//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and asserts on it.
//! Run with `cargo test -p qdual --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

use std::time::Instant;

use qdual::families::{eval_rec, eval_series, qdiff_residual, FamilyId, Params};
use qdual::identities::{check_with_tolerance, default_grid, sweep, IdentityId, ParamMap};
use qdual::jacobi::{spectrum_match, OperatorKind, OperatorTag};
use qdual::ortho_duality::{biortho_check, relation_report, unitarity_check, OrthoSpec, Perturbation, RelationId};
use qdual::qkernel::QContext;

const SERIES_RECURRENCE_TOL: f64 = 1e-11;
const QDIFF_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-9;
const UNITARITY_TOL: f64 = 1e-9;
const SPECTRUM_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-9;
const BILATERAL_TOL: f64 = 1e-8;
const NEGATIVE_CONTROL_FLOOR: f64 = 1e-3;
/// Tail target handed to the truncated sums, well below the pass thresholds so
/// the reported residual measures the relation rather than the stopping rule.
const CERTIFY_TARGET: f64 = 1e-12;

const BASES: [f64; 2] = [0.3, 0.5];
const MAX_DEGREE: usize = 30;
const MAX_ORTHO_INDEX: usize = 8;
const ORTHO_TRUNC: usize = 400;
const SAMPLE_X: [f64; 10] = [-50.0, -5.0, -2.0, -0.7, -0.2, 0.2, 0.7, 2.0, 5.0, 50.0];

fn report(name: &str, pass: bool, detail: String) {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn ctx(q: f64) -> QContext {
    QContext::with_settings(q, 1e-12, 10_000, QContext::DEFAULT_GUARD).unwrap()
}

/// Two in-domain parameter points per family, valid for both bases.
fn family_points(f: FamilyId) -> [Params; 2] {
    use FamilyId::*;
    match f {
        LittleQJacobi | DualLittleQJacobi => [Params::ab(0.3, 0.4), Params::ab(0.6, -0.5)],
        BigQJacobi | DualBigQJacobi => [Params::abc(0.3, 0.4, -0.5), Params::abc(0.7, 0.2, -1.5)],
        DiscreteQUltra | DualDiscreteQUltra => [Params::a(0.8), Params::a(1.5)],
        DiscreteQUltraTilde | DualDiscreteQUltraTilde => [Params::a(0.8), Params::a(2.0)],
        BigQLaguerre => [Params::ab(0.4, -0.3), Params::ab(0.8, -1.2)],
        QMeixner => [Params::ab(0.4, 0.75), Params::ab(1.2, 2.0)],
        AltQCharlier | DualAltQCharlier => [Params::a(0.7), Params::a(1.3)],
        AlSalamCarlitzI => [Params::a(-0.6), Params::a(-1.5)],
        AlSalamCarlitzII => [Params::a(0.5), Params::a(1.2)],
        QCharlier => [Params::a(0.6), Params::a(2.0)],
        LittleQLaguerre => [Params::a(0.5), Params::a(1.2)],
        BilateralASC => [Params::bilateral(0.7, 1.3, 0.6), Params::bilateral(0.4, 2.0, 0.8)],
    }
}

#[test]
fn series_matches_recurrence_for_every_family() {
    let start = Instant::now();
    let (mut worst, mut worst_at, mut samples, mut errors) = (0.0f64, String::new(), 0usize, Vec::new());
    for q in BASES {
        let c = ctx(q);
        for f in FamilyId::ALL {
            for p in family_points(f) {
                for x in SAMPLE_X {
                    samples += 1;
                    for n in 0..=MAX_DEGREE {
                        match (eval_series(f, &p, n, x, &c), eval_rec(f, &p, n, x, &c)) {
                            (Ok(s), Ok(r)) => {
                                let dev = (s - r).abs() / s.abs().max(1.0);
                                if dev > worst {
                                    worst = dev;
                                    worst_at = format!("{f} q={q} n={n} x={x}");
                                }
                            }
                            (s, r) => errors.push(format!("{f} q={q} n={n} x={x}: {s:?} {r:?}")),
                        }
                    }
                }
            }
        }
    }
    let per_family = samples / (FamilyId::ALL.len() * BASES.len());
    report(
        "series-recurrence",
        errors.is_empty() && worst <= SERIES_RECURRENCE_TOL && per_family >= 20,
        format!(
            "{} families, {per_family} samples each per base, n <= {MAX_DEGREE}, max rel dev {worst:.1e} at {worst_at} (tol {SERIES_RECURRENCE_TOL:e}), {} errors, {:.2}s",
            FamilyId::ALL.len(),
            errors.len(),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn q_difference_equations_hold() {
    use FamilyId::*;
    let families = [LittleQJacobi, BigQJacobi, BigQLaguerre, AltQCharlier, AlSalamCarlitzI, LittleQLaguerre];
    let (mut worst, mut worst_at, mut errors) = (0.0f64, String::new(), Vec::new());
    for q in BASES {
        let c = ctx(q);
        for f in families {
            for p in family_points(f) {
                for x in SAMPLE_X {
                    for n in 0..=MAX_DEGREE {
                        match qdiff_residual(f, &p, n, x, &c) {
                            Ok(r) if r > worst => {
                                worst = r;
                                worst_at = format!("{f} q={q} n={n} x={x}");
                            }
                            Ok(_) => {}
                            Err(e) => errors.push(format!("{f} q={q} n={n} x={x}: {e}")),
                        }
                    }
                }
            }
        }
    }
    report(
        "q-difference",
        errors.is_empty() && worst <= QDIFF_TOL,
        format!("{} families, max residual {worst:.1e} at {worst_at} (tol {QDIFF_TOL:e}), {} errors", families.len(), errors.len()),
    );
}

#[test]
fn orthogonality_relations_hold() {
    let start = Instant::now();
    let (mut worst, mut worst_at, mut failures) = (0.0f64, String::new(), Vec::new());
    for q in BASES {
        for r in RelationId::ALL {
            let outcome = OrthoSpec::with_context(r, r.default_params(), ctx(q))
                .and_then(|spec| relation_report(&spec, MAX_ORTHO_INDEX, ORTHO_TRUNC, CERTIFY_TARGET));
            match outcome {
                Ok(rep) => {
                    if rep.residual > worst {
                        worst = rep.residual;
                        worst_at = format!("{r} q={q}");
                    }
                    if rep.residual > ORTHO_TOL {
                        failures.push(format!("{r} q={q}: {:.1e}", rep.residual));
                    }
                }
                Err(e) => failures.push(format!("{r} q={q}: {e}")),
            }
        }
    }
    report(
        "orthogonality",
        failures.is_empty(),
        format!(
            "{} relations, m, m' <= {MAX_ORTHO_INDEX}, max residual {worst:.1e} at {worst_at} (tol {ORTHO_TOL:e}), failures {failures:?}, {:.2}s",
            RelationId::ALL.len(),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn connection_matrices_are_unitary() {
    let cross = [IdentityId::DualBigQJacobiCross, IdentityId::QCharlierCross, IdentityId::QMeixnerCross];
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for q in BASES {
        for tag in OperatorTag::ALL {
            let outcome = OperatorKind::new(tag, tag.default_params(), q).and_then(|k| unitarity_check(&k, 10, ORTHO_TRUNC, CERTIFY_TARGET));
            match outcome {
                Ok(rep) => {
                    worst = worst.max(rep.residual);
                    if rep.residual > UNITARITY_TOL {
                        failures.push(format!("unitarity {tag} q={q}: {:.1e}", rep.residual));
                    }
                }
                Err(e) => failures.push(format!("unitarity {tag} q={q}: {e}")),
            }
        }
        let a = OperatorTag::A.default_params();
        match biortho_check(a.a, a.b, q, 4, ORTHO_TRUNC, CERTIFY_TARGET) {
            Ok(rep) => {
                worst = worst.max(rep.residual);
                if rep.residual > UNITARITY_TOL {
                    failures.push(format!("biorthogonality q={q}: {:.1e}", rep.residual));
                }
            }
            Err(e) => failures.push(format!("biorthogonality q={q}: {e}")),
        }
        for id in cross {
            let rep = sweep(id, &default_grid(id), &ctx(q));
            worst = worst.max(rep.max_residual);
            if rep.max_residual > UNITARITY_TOL {
                failures.push(format!("{id} q={q}: {:.1e}", rep.max_residual));
            }
        }
    }
    report(
        "unitarity",
        failures.is_empty(),
        format!(
            "{} operator kinds, 10x10 blocks, biorthogonality and {} cross sums, max residual {worst:.1e} (tol {UNITARITY_TOL:e}), failures {failures:?}",
            OperatorTag::ALL.len(),
            cross.len()
        ),
    );
}

#[test]
fn spectra_match_predicted_lattices() {
    let start = Instant::now();
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for tag in OperatorTag::ALL {
        let outcome = OperatorKind::new(tag, tag.default_params(), 0.5).and_then(|k| spectrum_match(&k, 80, 10));
        match outcome {
            Ok(rep) => {
                worst = worst.max(rep.max_abs_err);
                if rep.max_abs_err > SPECTRUM_TOL {
                    failures.push(format!("{tag}: {:.1e}", rep.max_abs_err));
                }
            }
            Err(e) => failures.push(format!("{tag}: {e}")),
        }
    }
    report(
        "spectra",
        failures.is_empty(),
        format!(
            "{} operators, N = 80, top 10, max abs err {worst:.1e} (tol {SPECTRUM_TOL:e}), failures {failures:?}, {:.2}s",
            OperatorTag::ALL.len(),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn identity_registry_holds_on_default_grids() {
    let start = Instant::now();
    let (mut worst, mut points, mut failures) = (0.0f64, 0usize, Vec::new());
    for q in BASES {
        for &id in IdentityId::ALL {
            let rep = sweep(id, &default_grid(id), &ctx(q));
            points += rep.points.len();
            worst = worst.max(rep.max_residual);
            if rep.max_residual > IDENTITY_TOL {
                failures.push(format!("{id} q={q}: {:.1e}", rep.max_residual));
            }
        }
    }
    report(
        "identities",
        failures.is_empty(),
        format!(
            "{} identities, {points} grid points, max residual {worst:.1e} (tol {IDENTITY_TOL:e}), failures {failures:?}, {:.2}s",
            IdentityId::ALL.len(),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn bilateral_tilde_orthogonality_holds() {
    let (mut worst, mut points, mut failures) = (0.0f64, 0usize, Vec::new());
    for q in BASES {
        let c = ctx(q);
        for d in [q, 0.7] {
            for r in 0..=4 {
                for s in 0..=4 {
                    let p: ParamMap = [("a", 1.0), ("d", d), ("r", r as f64), ("s", s as f64)]
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v))
                        .collect();
                    points += 1;
                    match check_with_tolerance(IdentityId::BilateralTildeOrthogonality, &p, &c, BILATERAL_TOL) {
                        Ok(rep) => {
                            worst = worst.max(rep.residual);
                            if !rep.pass {
                                failures.push(format!("q={q} d={d} r={r} s={s}: {:.1e}", rep.residual));
                            }
                        }
                        Err(e) => failures.push(format!("q={q} d={d} r={r} s={s}: {e}")),
                    }
                }
            }
        }
    }
    report(
        "bilateral",
        failures.is_empty(),
        format!("{points} points, r, s <= 4, d in {{q, 0.7}}, max residual {worst:.1e} (tol {BILATERAL_TOL:e}), failures {failures:?}"),
    );
}

#[test]
fn perturbed_weights_are_detected() {
    let (mut weakest, mut weakest_at, mut misses) = (f64::INFINITY, String::new(), Vec::new());
    for q in BASES {
        for r in RelationId::ALL {
            let spec = OrthoSpec::with_context(r, r.default_params(), ctx(q)).unwrap();
            for pert in [Perturbation::ConstantExponent, Perturbation::IndexExponent] {
                match relation_report(&spec.perturbed(pert), 3, ORTHO_TRUNC, ORTHO_TOL) {
                    Ok(rep) => {
                        if rep.residual < weakest {
                            weakest = rep.residual;
                            weakest_at = format!("{r} {pert:?} q={q}");
                        }
                        if !(rep.residual > NEGATIVE_CONTROL_FLOOR) {
                            misses.push(format!("{r} {pert:?} q={q}: {:.1e}", rep.residual));
                        }
                    }
                    Err(e) => misses.push(format!("{r} {pert:?} q={q}: {e}")),
                }
            }
        }
    }
    report(
        "negative-controls",
        misses.is_empty(),
        format!(
            "{} perturbed relations, smallest residual {weakest:.1e} at {weakest_at} (floor {NEGATIVE_CONTROL_FLOOR:e}), misses {misses:?}",
            2 * RelationId::ALL.len() * BASES.len()
        ),
    );
}
