//! Browser demo bindings. Every entry point returns a JSON string; failures
//! come back as `{"error": "..."}` so the page can show them inline.

use serde_json::json;
use vab_core::examples;
use vab_core::io::{analyze, parse_element};
use vab_core::separability::{k3_exponent, ExponentMode, SearchOptions};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(r: Result<serde_json::Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Names of the built-in examples.
#[wasm_bindgen]
pub fn example_names() -> String {
    json!(examples::NAMES).to_string()
}

/// Square hull and W/V lattices of a built-in example.
#[wasm_bindgen]
pub fn analyze_example(name: &str) -> String {
    respond((|| {
        let ex = examples::by_name(name).map_err(err)?;
        let mut report = analyze(&ex.group).map_err(err)?;
        report.name = Some(ex.name.to_string());
        serde_json::to_value(report).map_err(err)
    })())
}

/// Decides whether `x` and `y` (written `v1,v2,..;g`) are conjugate.
#[wasm_bindgen]
pub fn is_conjugate(name: &str, x: &str, y: &str) -> String {
    respond((|| {
        let grp = examples::by_name(name).map_err(err)?.group;
        let (x, y) = (parse_element(x).map_err(err)?, parse_element(y).map_err(err)?);
        let c = grp.is_conjugate(&x, &y).map_err(err)?;
        Ok(json!({ "conjugate": c.conjugate, "witness": c.witness }))
    })())
}

/// Exact exponent with its naive upper bound, under a node budget.
#[wasm_bindgen]
pub fn exponent(name: &str, budget: u32) -> String {
    respond((|| {
        let grp = examples::by_name(name).map_err(err)?.group;
        let opts = SearchOptions { budget: budget as u64, parallel: false, ..SearchOptions::default() };
        let exact = k3_exponent(&grp, ExponentMode::Exact, &[], &opts).map_err(err)?;
        serde_json::to_value(exact).map_err(err)
    })())
}
