use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use sympindex::cli::run;

fn write(dir: &tempfile::TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn call(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["sympindex"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::String(out.stdout.clone()));
    (out.code, v)
}

fn rotation_profile(base: i64) -> Value {
    json!({
        "decomposition": {
            "d": 2,
            "blocks": [
                {"kind": "Rot", "angle": {"rat": [1, 3]}},
                {"kind": "Rot", "angle": {"irr": {"approx": "0.2718281828459045235360287471352662497757"}}}
            ]
        },
        "base_index": base
    })
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn betti_prints_number() {
    let (code, v) = call(&["betti", "--n", "3", "--k", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!(2));
}

#[test]
fn index_at_one_is_base_index() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "p.json", &rotation_profile(3));
    let (code, v) = call(&["index", "--profile", p.to_str().unwrap(), "--m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["mu_minus"], json!(3));
    assert_eq!(v["m"], json!(1));
}

#[test]
fn index_accepts_request_object() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "r.json", &json!({"profile": rotation_profile(3), "m": 5}));
    let (code, v) = call(&["index", "--profile", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["m"], json!(5));
}

#[test]
fn missing_file_is_input_error() {
    let (code, v) = call(&["morse", "--config", "/nonexistent/config.json", "--m-top", "10"]);
    assert_eq!(code, 2);
    assert!(v.get("error").is_some(), "{v}");
}

#[test]
fn usage_error_exits_two() {
    let (code, _) = call(&["betti", "--n", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn malformed_json_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, "{\"decomposition\": ").unwrap();
    let (code, _) = call(&["mean", "--profile", p.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn search_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let profiles = write(&dir, "ps.json", &json!([rotation_profile(3), rotation_profile(5)]));
    let (code, found) = call(&["cij-find", profiles.to_str().unwrap(), "--nmax", "100000"]);
    assert_eq!(code, 0, "{found}");
    let tuple = found[0].clone();
    let t = write(&dir, "t.json", &tuple);
    let (code, report) = call(&["cij-verify", "--profiles", profiles.to_str().unwrap(), "--tuple", t.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["ok"], json!(true));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let profiles = write(&dir, "ps.json", &json!([rotation_profile(3)]));
    let a = run(["sympindex", "cij-find", profiles.to_str().unwrap(), "--want", "3"]);
    let b = run(["sympindex", "cij-find", profiles.to_str().unwrap(), "--want", "3"]);
    assert_eq!(a, b);
}

#[test]
fn empty_fixture_violates_morse() {
    let (code, v) = call(&["morse", "--config", &fixture("empty"), "--m-top", "10"]);
    assert_eq!(code, 1);
    assert_eq!(v["first_violation"], json!(2));
}

#[test]
fn sdm_fixture_is_forced() {
    let (code, v) = call(&["certify-1-1", "--config", &fixture("sdm-forcing-n3")]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], json!("FORCED_INFINITELY_MANY"));
}

#[test]
fn fixtures_regenerate_identically() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["empty", "sdm-forcing-n3"] {
        let (code, _) = call(&["gen-fixtures", "--out", dir.path().to_str().unwrap(), "--which", name]);
        assert_eq!(code, 0);
        let fresh = fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap();
        assert_eq!(fresh, fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn table_output_is_text() {
    let out = run(["sympindex", "--table", "betti", "--n", "4", "--k", "3"]);
    assert_eq!(out.code, 0);
    assert!(serde_json::from_str::<Value>(&out.stdout).map_or(true, |v| !v.is_object()));
}

#[test]
fn grouped_cij_spelling_matches() {
    let dir = tempfile::tempdir().unwrap();
    let profiles = write(&dir, "ps.json", &json!([rotation_profile(3)]));
    let p = profiles.to_str().unwrap();
    assert_eq!(run(["sympindex", "cij", "find", p]), run(["sympindex", "cij-find", p]));
}

#[test]
fn precision_from_environment_is_used() {
    let out = run(["sympindex", "--precision", "0", "betti", "--n", "3", "--k", "4"]);
    assert_eq!(out.code, 0);
}
