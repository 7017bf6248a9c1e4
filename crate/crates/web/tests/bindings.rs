use ccenum_web::{analytic_json, enumerate_json, l4_json};
use serde_json::Value;

#[test]
fn two_body_enumeration_finds_four_solutions() {
    let out: Value = serde_json::from_str(&enumerate_json(2, 1.0, 2.0, 100_000).unwrap()).unwrap();
    assert_eq!(out["complete"], true);
    assert_eq!(out["certificates"].as_array().unwrap().len(), 4);
}

#[test]
fn large_k_is_refused() {
    assert!(enumerate_json(4, 0.75, 2.25, 10).is_err());
}

#[test]
fn rhombus_has_parameters_and_labelings() {
    let out: Value =
        serde_json::from_str(&analytic_json("rhombus", 4, 0.75, 2.25).unwrap()).unwrap();
    let k = &out["parameters"]["kratio"];
    assert!(k[0].as_f64().unwrap() <= 0.39828 && k[1].as_f64().unwrap() >= 0.39826);
    assert_eq!(out["configurations"].as_array().unwrap().len(), 24);
    assert!(analytic_json("hexagon", 4, 1.0, 2.0).is_err());
}

#[test]
fn equal_heavy_masses_give_three_quarters_and_nine_quarters() {
    let out: Value = serde_json::from_str(&l4_json(0.5).unwrap()).unwrap();
    assert!(out["a"][0].as_f64().unwrap() <= 0.75 && out["a"][1].as_f64().unwrap() >= 0.75);
    assert!(out["b"][0].as_f64().unwrap() <= 2.25 && out["b"][1].as_f64().unwrap() >= 2.25);
    assert!(l4_json(1.5).is_err());
}
