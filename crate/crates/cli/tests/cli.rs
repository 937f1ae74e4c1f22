use std::path::PathBuf;
use std::process::{Command, Output};

use knotrep::knotio::corpus_entry;
use serde_json::Value;

fn write_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn knot_file(name: &str) -> PathBuf {
    write_file(&format!("{name}.json"), &corpus_entry(name).unwrap().presentation().to_json())
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotrep")).args(args).env_remove("KNOTREP_TOL").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_trefoil() {
    let f = knot_file("3_1");
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["alexander"]["delta"], "t^2 - t + 1");
    let table = v["hypothesis"].as_array().unwrap();
    let holds: Vec<u64> = table.iter().filter(|r| r["holds"] == true).map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(holds, vec![2]);
}

#[test]
fn analyze_unknot_has_no_admissible_n() {
    let f = write_file("unknot.json", r#"{"name": "0_1", "generators": ["a"], "relators": [], "meridian": "a"}"#);
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["alexander"]["delta"], "1");
    // no torsion factors, so the table is empty and omitted
    assert!(v.get("hypothesis").is_none());
    let out = run(&["build", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn build_trefoil_and_refuse_n3() {
    let f = knot_file("3_1");
    let out = run(&["build", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let b = &json(&out)["branches"][0];
    assert_eq!(b["relators_identity"], true);
    assert_eq!(b["trace_formula_holds"], true);
    let out = run(&["build", f.to_str().unwrap(), "--n", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn cohomology_trefoil() {
    let f = knot_file("3_1");
    let out = run(&["cohomology", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["branches"][0]["cohomology"];
    assert_eq!(c["sl"]["h1"], 1);
    assert_eq!(c["sl"]["z1"], 4);
    assert_eq!(c["filtration"][0]["dims"]["h1"], 0);
}

#[test]
fn deform_trefoil_and_divergence() {
    let f = knot_file("3_1");
    let out = run(&["deform", f.to_str().unwrap(), "--t", "0.01", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["branches"][0]["embeddings"][0]["deformations"][0];
    assert_eq!(r["irreducible"], true);
    assert_eq!(r["burnside_dim"], 4);
    let out = run(&["deform", f.to_str().unwrap(), "--t", "0"]);
    assert_eq!(json(&out)["branches"][0]["embeddings"][0]["deformations"][0]["irreducible"], false);
    let out = run(&["deform", f.to_str().unwrap(), "--t", "50"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));
}

#[test]
fn reports_are_byte_stable() {
    let f = knot_file("3_1");
    let args = ["deform", f.to_str().unwrap(), "--seed", "3", "--all-branches"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let pa = run(&["cohomology", f.to_str().unwrap(), "--pretty"]);
    let pb = run(&["cohomology", f.to_str().unwrap(), "--pretty"]);
    assert_eq!(pa.stdout, pb.stdout);
}

#[test]
fn parse_errors_exit_2() {
    let out = run(&["analyze", "/nonexistent/knot.json"]);
    assert_eq!(out.status.code(), Some(2));
    let f = write_file("broken.json", "{\n  \"name\": \"x\",\n  \"generators\": [\"a\"\n}");
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn tolerance_override_from_env() {
    let f = knot_file("3_1");
    let out = Command::new(env!("CARGO_BIN_EXE_knotrep"))
        .args(["deform", f.to_str().unwrap(), "--t", "0.01"])
        .env("KNOTREP_TOL", r#"{"newton_max_iter": 7}"#)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tolerances"]["newton_max_iter"], 7);
    let out = Command::new(env!("CARGO_BIN_EXE_knotrep"))
        .args(["deform", f.to_str().unwrap()])
        .env("KNOTREP_TOL", r#"{"bogus": 1}"#)
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
}
