use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_affine-verma"));
    c.env_remove("AFFINE_VERMA_MODE_BOUND");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn validate(schema: &str, doc: &Value) {
    let path = repo_root().join("docs/schema").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn dump_algebra_lists_the_basis_and_round_trips() {
    let o = run(&["dump-algebra", "--type", "D", "--l", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("dump-algebra.schema.json", &v);
    assert_eq!(v["basis"].as_array().unwrap().len(), 28);
    let dump: affine_verma::liealg::AlgebraDump = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&dump).unwrap(), v);

    let text = run(&["dump-algebra", "--type", "B", "--l", "4", "--format", "text"]);
    assert_eq!(text.status.code(), Some(0));
    assert_eq!(String::from_utf8(text.stdout).unwrap().lines().count(), 37);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["dump-algebra", "--type", "B", "--l", "3"][..],
        &["dump-algebra", "--type", "C", "--l", "4"],
        &["verify", "triality", "--l", "5"],
        &["verify", "singular", "--l", "3"],
        &["verify", "singular", "--l", "4", "--l-range", "4..5"],
        &["verify", "admissible", "--mode-bound", "0"],
        &["verify", "appendix", "--type", "B"],
        &["verify", "nonsense"],
        &["trace", "--root", "/nonexistent/affine-verma"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_singular_b() {
    let o = run(&["verify", "singular", "--type", "B", "--l", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("verify.schema.json", &v);
    assert_eq!(v["checks"][0]["check"], "singular-B");
    assert!(v["checks"][0]["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["residual"].as_object().unwrap().is_empty()));
}

#[test]
fn verify_embedding_l5() {
    let o = run(&["verify", "embedding", "--l", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("verify.schema.json", &v);
    assert_eq!(v["checks"][0]["report"]["certificate"]["equals_embedded_vd"], true);
}

#[test]
fn verify_triality_l4() {
    let o = run(&["verify", "triality", "--l", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("verify.schema.json", &v);
    assert_eq!(v["checks"][0]["report"]["pi_prime_vd_scalar"], "1");
}

#[test]
fn verify_all_runs_every_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.json");
    let o = run(&["verify", "all", "--l-range", "4..6", "--jobs", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    validate("verify.schema.json", &v);
    let checks = v["checks"].as_array().unwrap();
    // six families per rank plus triality at l = 4
    assert_eq!(checks.len(), 3 * 6 + 1);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(checks.iter().filter(|c| c["check"] == "triality").count(), 1);

    let trace = run(&["trace", "--root", repo_root().to_str().unwrap(), "--results", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(trace.status.code(), Some(0));
    let t = stdout_json(&trace);
    validate("trace.schema.json", &t);
    assert!(t["entries"].as_array().unwrap().iter().all(|e| e["status"] != "fail"));
}

#[test]
fn corrupted_vd_fails_with_a_monomial_diff() {
    let o = run(&["verify", "singular", "--type", "D", "--l", "4", "--corrupt-vd"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    validate("verify.schema.json", &v);
    assert_eq!(v["pass"], false);
    let residuals: Vec<&Value> = v["checks"][0]["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| &c["residual"])
        .filter(|r| !r.as_object().unwrap().is_empty())
        .collect();
    assert!(!residuals.is_empty());
}

#[test]
fn output_is_deterministic_and_sorted() {
    let a = run(&["verify", "conformal", "--l", "4"]);
    let b = run(&["verify", "conformal", "--l", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    validate("verify.schema.json", &serde_json::from_str(&text).unwrap());
}

#[test]
fn mode_bound_comes_from_the_environment() {
    let o = bin()
        .args(["verify", "admissible", "--l", "4"])
        .env("AFFINE_VERMA_MODE_BOUND", "7")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("verify.schema.json", &v);
    assert_eq!(v["mode_bound"], 7);
    assert_eq!(v["checks"][0]["report"]["admissibility"]["mode_bound"], 7);
}

#[test]
fn human_table_has_one_row_per_check() {
    let o = run(&["verify", "singular", "--l", "4", "--human"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("check"));
    assert!(text.contains("singular-B") && text.contains("singular-D"));
    assert!(text.trim_end().ends_with("2 of 2 checks passed"));
}

#[test]
fn checked_in_trace_matrix_is_current() {
    let root = repo_root();
    let o = run(&["trace", "--root", root.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let fresh = String::from_utf8(o.stdout).unwrap();
    let strip = |s: &str| s.replace("| pass |", "| covered |");
    let stored = std::fs::read_to_string(root.join("docs/trace.md")).unwrap();
    assert_eq!(strip(&stored), strip(&fresh), "regenerate docs/trace.md with `affine-verma trace`");
}

#[test]
fn removing_an_annotation_breaks_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let tests = dir.path().join("crates/x/tests");
    std::fs::create_dir_all(&tests).unwrap();
    let ids: Vec<&str> = affine_verma::trace::CLAIMS.iter().map(|c| c.id).collect();
    let mut src = String::new();
    for (i, id) in ids.iter().enumerate().skip(1) {
        src.push_str(&format!("// covers: {id}\n#[test]\nfn t{i}() {{}}\n"));
    }
    std::fs::write(tests.join("t.rs"), &src).unwrap();
    let o = run(&["trace", "--root", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(ids[0]));

    src.push_str(&format!("// covers: {}\n#[test]\nfn t0() {{}}\n", ids[0]));
    std::fs::write(tests.join("t.rs"), &src).unwrap();
    assert_eq!(run(&["trace", "--root", dir.path().to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn automorphism_dump_matches_the_generator_permutation() {
    let o = run(&["dump-automorphism", "--sigma", "3,2,4,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["sigma"], serde_json::json!([3, 2, 4, 1]));
    assert_eq!(v["images"].as_object().unwrap().len(), 28);
    assert_eq!(run(&["dump-automorphism", "--sigma", "2,1,3,4"]).status.code(), Some(2));
    assert_eq!(run(&["dump-automorphism", "--sigma", "1,2,3"]).status.code(), Some(2));
}
