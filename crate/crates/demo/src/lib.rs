//! Browser bindings for the `www/` page. Every export takes the generators
//! as text (`"4, 5, 6"`) and returns a JSON string; errors surface in
//! JavaScript as thrown strings.

use nslab::resolution::graded_betti;
use nslab::tangent_cone::{b1_g, hilbert_function_g, stable_order_threshold};
use nslab::NumericalSemigroup;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Browsers freeze on anything much larger; the page asks for small inputs.
const MAX_GENERATOR: u64 = 500;

fn parse(gens: &str) -> Result<NumericalSemigroup, String> {
    let s: NumericalSemigroup = gens.parse().map_err(|e: nslab::Error| e.to_string())?;
    if s.generators().iter().any(|&g| g > MAX_GENERATOR) {
        return Err(format!("generators above {MAX_GENERATOR} are not supported here"));
    }
    Ok(s)
}

/// Membership of `0..F + m`, plus the pseudo-Frobenius numbers and the
/// invariant record.
pub fn gap_strip_json(gens: &str) -> Result<Value, String> {
    let s = parse(gens)?;
    let end = (s.frobenius() + 1).max(0) + s.multiplicity() as i64;
    let strip: Vec<bool> = (0..end).map(|n| s.contains(n)).collect();
    let pf: Vec<u64> = if s.is_naturals() {
        Vec::new()
    } else {
        s.pseudo_frobenius().map_err(|e| e.to_string())?.iter().collect()
    };
    Ok(json!({
        "gens": s.generators(),
        "invariants": s.invariants(),
        "strip": strip,
        "pseudo_frobenius": pf,
        "symmetric": s.is_symmetric(),
        "almost_symmetric": s.is_almost_symmetric(),
    }))
}

/// Hilbert function of the tangent cone up to two past the point where it
/// stabilizes, with b1 of the initial-form ideal.
pub fn hilbert_curve_json(gens: &str) -> Result<Value, String> {
    let s = parse(gens)?;
    let jmax = stable_order_threshold(&s) as usize + 2;
    let hf = hilbert_function_g(&s, jmax).map_err(|e| e.to_string())?;
    let b1 = b1_g(&s, None).map_err(|e| e.to_string())?;
    Ok(json!({ "gens": s.generators(), "hf": hf, "b1_g": b1 }))
}

pub fn betti_table_json(gens: &str, characteristic: u32) -> Result<Value, String> {
    let s = parse(gens)?;
    let t = graded_betti(&s, characteristic).map_err(|e| e.to_string())?;
    Ok(json!({ "gens": s.generators(), "table": t }))
}

fn export(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gap_strip(gens: &str) -> Result<String, JsValue> {
    export(gap_strip_json(gens))
}

#[wasm_bindgen]
pub fn hilbert_curve(gens: &str) -> Result<String, JsValue> {
    export(hilbert_curve_json(gens))
}

#[wasm_bindgen]
pub fn betti_table(gens: &str, characteristic: u32) -> Result<String, JsValue> {
    export(betti_table_json(gens, characteristic))
}
