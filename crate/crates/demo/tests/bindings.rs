use serde_json::{json, Value};
use sympindex_demo::*;

const PROFILE: &str = r#"{
  "decomposition": {"d": 2, "blocks": [
    {"kind": "Rot", "angle": {"rat": [1, 3]}},
    {"kind": "Rot", "angle": {"irr": {"approx": "0.2718281828459045235360287471352662497757"}}}
  ]},
  "base_index": 3
}"#;

#[test]
fn index_table_starts_at_base_index() {
    let v = index_table(PROFILE, 5).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["rows"][0]["mu_minus"], json!(3));
}

#[test]
fn jump_search_returns_verified_tuples() {
    let v = jump_search(&format!("[{PROFILE}]"), 100_000, 2).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 2);
    assert!(list.iter().all(|t| t["verified"] == json!(true)));
}

#[test]
fn betti_row_for_three() {
    let v = betti_row(3, 6).unwrap();
    let b: Vec<Value> = v["betti"].as_array().unwrap().iter().map(|x| x["b"].clone()).collect();
    assert_eq!(v["betti"][0]["k"], json!(2));
    assert_eq!(b, vec![json!(1), json!(0), json!(2), json!(0), json!(2)]);
}

#[test]
fn bad_input_becomes_error_object() {
    let v: Value = serde_json::from_str(&index_table_js("{", 3)).unwrap();
    assert!(v.get("error").is_some());
}
