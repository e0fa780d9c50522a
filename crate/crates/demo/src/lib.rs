//! WebAssembly bindings behind `www/index.html`. Every entry point takes and
//! returns JSON text; errors come back as `{"error": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sympindex::cijump::{find_tuples, verify_tuple, SearchConfig};
use sympindex::error::Result;
use sympindex::indexiter::{iterate_indices, mean_index, IndexProfile};
use sympindex::json::*;
use sympindex::reebcount::betti;

fn profile(text: &str) -> Result<IndexProfile> {
    profile_from_json(&parse_json::<ProfileJson>(text)?, &ParseOptions::default())
}

fn respond(r: Result<Value>) -> String {
    to_pretty(&r.unwrap_or_else(|e| error_json(&e)))
}

/// Indices of the iterates `1..=m_max` of a profile.
pub fn index_table(profile_json: &str, m_max: u64) -> Result<Value> {
    let p = profile(profile_json)?;
    let mean = real_string(&mean_index(&p));
    let rows = (1..=m_max)
        .map(|m| {
            let ix = iterate_indices(&p, m)?;
            Ok(json!({ "m": m, "mu_minus": ix.mu_minus, "mu_plus": ix.mu_plus, "nu": ix.nu }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "mean": mean, "rows": rows }))
}

/// Jump tuples for a list of profiles, each re-verified.
pub fn jump_search(profiles_json: &str, n_max: u64, want: usize) -> Result<Value> {
    let list: Vec<ProfileJson> = parse_json(profiles_json)?;
    let opts = ParseOptions::default();
    let ps = list.iter().map(|p| profile_from_json(p, &opts)).collect::<Result<Vec<_>>>()?;
    let cfg = SearchConfig { n_max, want, ..SearchConfig::default() };
    let tuples = find_tuples(&ps, &cfg)?;
    let out: Vec<Value> = tuples
        .iter()
        .map(|t| {
            let ok = verify_tuple(&ps, t, &cfg.delta).ok;
            json!({ "tuple": tuple_to_json(t), "verified": ok })
        })
        .collect();
    Ok(Value::Array(out))
}

/// Betti numbers of the positive equivariant homology for degrees `n − 1..=k_max`.
pub fn betti_row(n: i64, k_max: i64) -> Result<Value> {
    let row = (n - 1..=k_max).map(|k| Ok(json!({ "k": k, "b": betti(n, k)? }))).collect::<Result<Vec<_>>>()?;
    Ok(json!({ "n": n, "betti": row }))
}

#[wasm_bindgen(js_name = indexTable)]
pub fn index_table_js(profile_json: &str, m_max: u32) -> String {
    respond(index_table(profile_json, m_max as u64))
}

#[wasm_bindgen(js_name = jumpSearch)]
pub fn jump_search_js(profiles_json: &str, n_max: u32, want: u32) -> String {
    respond(jump_search(profiles_json, n_max as u64, want as usize))
}

#[wasm_bindgen(js_name = bettiRow)]
pub fn betti_row_js(n: i32, k_max: i32) -> String {
    respond(betti_row(n as i64, k_max as i64))
}
