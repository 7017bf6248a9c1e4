//! Browser bindings: small enumerations, closed-form families and the
//! equilateral-point Hessian, each returned as a JSON string.

use ccenum::analytic::{analytic_report, l4_hessian_params, Family};
use ccenum::aniso::AnisoProblem;
use ccenum::search::{enumerate_aniso, SearchSettings};
use ccenum::Interval;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest `k` the page will enumerate; beyond that a browser tab stalls.
pub const MAX_K: usize = 3;

fn pair(v: Interval) -> Value {
    json!([v.lo(), v.hi()])
}

fn points(flat: &[f64]) -> Value {
    flat.chunks(2).map(|p| json!([p[0], p[1]])).collect()
}

pub fn enumerate_json(k: usize, a: f64, b: f64, max_boxes: u64) -> Result<String, String> {
    if k > MAX_K {
        return Err(format!(
            "k = {k} is too slow for the browser; use the command line"
        ));
    }
    let prob = AnisoProblem::equal_masses(k, a, b).map_err(|e| e.to_string())?;
    let settings = SearchSettings {
        max_boxes,
        workers: 1,
        ..SearchSettings::default()
    };
    let report = enumerate_aniso(&prob, &settings).map_err(|e| e.to_string())?;
    let certs: Vec<Value> = report
        .certificates
        .iter()
        .map(|c| json!({ "shape": c.shape_class.label(), "points": points(&c.midpoint) }))
        .collect();
    Ok(json!({
        "complete": report.complete,
        "boxes": report.stats.boxes_processed,
        "certificates": certs,
    })
    .to_string())
}

pub fn analytic_json(family: &str, k: usize, a: f64, b: f64) -> Result<String, String> {
    let family: Family =
        serde_json::from_value(json!(family)).map_err(|_| format!("unknown family {family:?}"))?;
    let report = analytic_report(k, a, b, family).map_err(|e| e.to_string())?;
    let params: serde_json::Map<String, Value> = report
        .parameters
        .iter()
        .map(|(k, v)| (k.clone(), pair(*v)))
        .collect();
    let configs: Vec<Value> = report
        .certificates
        .iter()
        .map(|c| points(&c.midpoint))
        .collect();
    Ok(json!({ "parameters": params, "configurations": configs }).to_string())
}

pub fn l4_json(m1: f64) -> Result<String, String> {
    if !(m1 > 0.0 && m1 < 1.0) {
        return Err("m1 must lie in (0, 1)".into());
    }
    let ab = l4_hessian_params(m1, 1.0 - m1).map_err(|e| e.to_string())?;
    Ok(json!({ "a": pair(ab.a), "b": pair(ab.b), "rotation": ab.rotation }).to_string())
}

#[wasm_bindgen]
pub fn enumerate(k: usize, a: f64, b: f64, max_boxes: u64) -> Result<String, JsValue> {
    enumerate_json(k, a, b, max_boxes).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analytic(family: &str, k: usize, a: f64, b: f64) -> Result<String, JsValue> {
    analytic_json(family, k, a, b).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn l4_params(m1: f64) -> Result<String, JsValue> {
    l4_json(m1).map_err(|e| JsValue::from_str(&e))
}
