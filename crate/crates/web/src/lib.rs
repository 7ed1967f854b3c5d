//! Browser bindings: each export takes and returns JSON text, so the page
//! needs no glue beyond `JSON.parse`.

use polyrecon::deck_mod::{deck_mod_report, Theorem5Verdict};
use polyrecon::graph::parse_graph;
use polyrecon::io::{coeff_strings, deck_mod_to_json, deck_to_json, deck_from_json, outcome_to_json};
use polyrecon::reconstruct::reconstruct_full;
use polyrecon::{charpoly, deck, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Larger graphs make the page unresponsive; the CLI has no such limit.
pub const MAX_ORDER: usize = 16;

pub fn graph_summary(graph: &str) -> Result<Value> {
    let g = parse_graph(graph)?;
    if g.order() > MAX_ORDER {
        return Err(polyrecon::Error::OutOfRange(g.order()));
    }
    let d = deck(&g, true, None)?;
    Ok(json!({
        "n": g.order(),
        "edges": g.edge_count(),
        "phi": coeff_strings(charpoly(&g).coeffs()),
        "phi_complement": coeff_strings(charpoly(&g.complement()).coeffs()),
        "deck": deck_to_json(&d),
    }))
}

pub fn reconstruct_deck(deck_json: &str) -> Result<Value> {
    Ok(outcome_to_json(&reconstruct_full(&deck_from_json(deck_json)?)?))
}

pub fn mod4_report(deck_json: &str) -> Result<Value> {
    let d = deck_from_json(deck_json)?;
    if d.order() > MAX_ORDER {
        return Err(polyrecon::Error::OutOfRange(d.order()));
    }
    let r = deck_mod_report(&d)?;
    let mut v = deck_mod_to_json(&r);
    v["theorem5_applicable"] = json!(!matches!(r.theorem5, Theorem5Verdict::NotApplicable));
    Ok(v)
}

fn to_js(r: Result<Value>) -> std::result::Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Characteristic polynomials of the graph and its complement, plus the
/// generalized deck.
#[wasm_bindgen]
pub fn summary(graph: &str) -> std::result::Result<String, JsValue> {
    to_js(graph_summary(graph))
}

#[wasm_bindgen]
pub fn reconstruct(deck_json: &str) -> std::result::Result<String, JsValue> {
    to_js(reconstruct_deck(deck_json))
}

#[wasm_bindgen]
pub fn deck_mod(deck_json: &str) -> std::result::Result<String, JsValue> {
    to_js(mod4_report(deck_json))
}
