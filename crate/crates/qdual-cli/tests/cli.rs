use std::process::{Command, Output};

use serde_json::Value;

fn qdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdual"))
        .args(args)
        .env_remove("QDUAL_CONFIG")
        .output()
        .expect("failed to launch qdual")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

#[test]
fn alt_q_charlier_closed_form_value() {
    let out = qdual(&["eval", "--family", "alt-q-charlier", "-a", "1", "-n", "2", "--x", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.0625).abs() < 1e-15);
}

#[test]
fn out_of_domain_parameter_exits_two_and_names_the_constraint() {
    let out = qdual(&["eval", "--family", "little-q-jacobi", "-a", "3", "-b", "0.1", "-n", "2", "--x", "0.5"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("a < 1/q"), "stderr: {err}");
}

#[test]
fn lattice_evaluation_agrees_with_recurrence() {
    let out = qdual(&["eval", "--family", "little-q-jacobi", "-a", "0.2", "-b", "0.1", "-n", "3", "--x-lattice", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["series"].is_f64() && v["recurrence"].is_f64());
    assert!(v["diff"].as_f64().unwrap() <= 1e-11);
}

#[test]
fn negative_parameters_parse() {
    let out = qdual(&["eval", "--family", "al-salam-carlitz-1", "-a", "-0.6", "-n", "3", "--x", "-0.2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn little_q_jacobi_spectrum_passes() {
    let out = qdual(&["spectrum", "--op", "I1", "-a", "0.2", "-b", "0.1", "-N", "80", "--count", "10"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["pass"], Value::Bool(true));
}

#[test]
fn b2_spectrum_contains_both_signs_of_q_powers() {
    let out = qdual(&["spectrum", "--op", "B2", "-a", "-1", "-N", "80", "--count", "8"]);
    assert_eq!(code(&out), 0);
    let computed: Vec<f64> = json(&out)["pairs"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap()).collect();
    for k in 0..4 {
        let qk = 0.5f64.powi(k);
        for target in [qk, -qk] {
            assert!(computed.iter().any(|c| (c - target).abs() < 1e-8), "missing {target}");
        }
    }
}

#[test]
fn spectrum_count_guard_exits_two() {
    let out = qdual(&["spectrum", "--op", "I1", "-N", "80", "--count", "50"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_subcommand_and_family_exit_two() {
    assert_eq!(code(&qdual(&["frobnicate"])), 2);
    assert_eq!(code(&qdual(&["eval", "--family", "no-such-family", "-n", "1", "--x", "0.1"])), 2);
    assert_eq!(code(&qdual(&["eval", "--family", "alt-q-charlier", "-a", "1", "-n", "1", "--x", "1", "--q", "1.5"])), 2);
}

#[test]
fn perturbed_weight_fails_with_exit_one() {
    let ok = qdual(&["ortho", "--relation", "little-q-jacobi"]);
    assert_eq!(code(&ok), 0);
    let bad = qdual(&["ortho", "--relation", "little-q-jacobi", "--perturb", "constant-exponent"]);
    assert_eq!(code(&bad), 1);
    assert!(json(&bad)["residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn dual_unitarity_and_biorthogonality() {
    let out = qdual(&["dual", "--op", "A", "-K", "6", "--biortho"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out).as_array().unwrap().len(), 2);
    assert_eq!(code(&qdual(&["dual", "--op", "B1", "--biortho"])), 2);
}

#[test]
fn identity_csv_has_the_documented_columns() {
    let out = qdual(&["identity", "--id", "q-binomial", "--param", "a=0.3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,citation,param-point,lhs,rhs,residual,pass"));
    assert!(lines.next().unwrap().starts_with("q-binomial,"));
}

#[test]
fn identity_rejects_malformed_and_unknown_parameters() {
    assert_eq!(code(&qdual(&["identity", "--id", "q-binomial", "--param", "a"])), 2);
    assert_eq!(code(&qdual(&["identity", "--id", "q-binomial", "--param", "zz=1"])), 2);
}

#[test]
fn identity_sweep_and_list() {
    let out = qdual(&["identity", "--id", "dual-big-q-jacobi-symmetry", "--sweep"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out).as_array().unwrap().len(), 10);
    let list = json(&qdual(&["identity", "--list", "generating-function"]));
    assert!(list.as_array().unwrap().iter().all(|e| e["group"] == "generating-function"));
}

#[test]
fn list_families_covers_the_registry() {
    let out = qdual(&["list-families"]);
    assert_eq!(code(&out), 0);
    let reg = json(&out);
    assert_eq!(reg.as_array().unwrap().len(), 17);
    assert!(reg.as_array().unwrap().iter().any(|f| f["slug"] == "little-q-jacobi"));
}

#[test]
fn report_all_passes_and_is_deterministic() {
    let first = qdual(&["report-all"]);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stdout));
    let a = json(&first);
    let b = json(&qdual(&["report-all"]));
    assert_eq!(a["checks"], b["checks"]);
    let meta = &a["metadata"];
    assert_eq!(meta["total"], Value::from(a["checks"].as_array().unwrap().len()));
    assert_eq!(meta["failed"], Value::from(0));
}

#[test]
fn report_all_below_the_numeric_floor_reports_failures() {
    let out = qdual(&["report-all", "--tol", "1e-15"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert!(v["metadata"]["failed"].as_u64().unwrap() > 0);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["pass"] == true));
}

#[test]
fn report_all_csv_has_one_row_per_check() {
    let total = json(&qdual(&["report-all"]))["metadata"]["total"].as_u64().unwrap() as usize;
    let out = qdual(&["report-all", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "category");
    assert_eq!(rdr.records().map(|r| r.unwrap()).count(), total);
}

#[test]
fn config_file_supplies_defaults_and_flags_override_it() {
    let dir = std::env::temp_dir().join(format!("qdual-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(&path, r#"{"q": 0.3, "format": "csv"}"#).unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["eval", "--family", "alt-q-charlier", "-a", "1", "-n", "1", "--x", "1"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_qdual")).args(&args).env("QDUAL_CONFIG", &path).output().unwrap()
    };
    let csv_out = String::from_utf8(run(&[]).stdout).unwrap();
    assert!(csv_out.lines().nth(1).unwrap().contains(",0.3,"), "{csv_out}");
    let json_out = run(&["--format", "json", "--q", "0.5"]);
    assert_eq!(json(&json_out)["q"], Value::from(0.5));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("qdual-out-{}.json", std::process::id()));
    let out = qdual(&["list-families", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(serde_json::from_str::<Value>(&text).is_ok());
    std::fs::remove_file(&path).ok();
}
