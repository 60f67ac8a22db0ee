//! Browser bindings. Every export takes plain strings and numbers and
//! returns canonical JSON; errors come back as `{"error": "..."}`.

use std::collections::BTreeSet;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use orbicurve::arithmetic::{enumerate_points, ArithOrbifoldSpec};
use orbicurve::orbifold::{canonical_degree, is_general_type_via_five, kodaira_dimension, KodairaClass, OrbifoldCurve, OrbifoldDivisor};
use orbicurve::report::{canonical_string, q_to_json};
use orbicurve::sextic::run_pipeline;

/// Height cap for the in-browser enumerator.
pub const MAX_HEIGHT: u64 = 100_000;

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("cannot read {t:?}")))
        .collect()
}

fn finish(r: Result<Value, String>) -> String {
    canonical_string(&r.unwrap_or_else(|e| json!({"error": e})))
}

pub fn classify_json(genus: u32, marks: &str) -> String {
    finish((|| {
        let ms: Vec<u32> = parse_list(marks)?;
        let d = OrbifoldDivisor::from_multiplicities(&ms).map_err(|e| e.to_string())?;
        let five = genus == 0 && is_general_type_via_five(&d);
        let c = OrbifoldCurve::new(genus, d);
        let kappa = match kodaira_dimension(&c) {
            KodairaClass::MinusInfinity => json!("-inf"),
            KodairaClass::Zero => json!(0),
            KodairaClass::One => json!(1),
        };
        Ok(json!({"kappa": kappa, "degree": q_to_json(&canonical_degree(&c)), "dominates_minimal": five}))
    })())
}

pub fn enumerate_json(marks: &str, height: u64, exclude: &str) -> String {
    finish((|| {
        let ms: Vec<u32> = parse_list(marks)?;
        let [u, v, w] = ms[..] else {
            return Err("give three multiplicities for 0, 1, inf".into());
        };
        if height > MAX_HEIGHT {
            return Err(format!("height is capped at {MAX_HEIGHT} in the browser"));
        }
        let excluded: BTreeSet<u64> = parse_list(exclude)?.into_iter().collect();
        let spec = ArithOrbifoldSpec::standard(u, v, w, excluded).map_err(|e| e.to_string())?;
        let pts = enumerate_points(&spec, height, 1).map_err(|e| e.to_string())?;
        let points: Vec<Value> = pts
            .iter()
            .map(|r| json!({"a": r.point.a, "b": r.b, "c": r.point.c, "height": r.height}))
            .collect();
        Ok(json!({"spec": spec.label(), "height": height, "count": points.len(), "points": points}))
    })())
}

pub fn sextic_json(seed: u64) -> String {
    finish((|| {
        let r = run_pipeline(seed).map_err(|e| e.to_string())?;
        let full = r.to_json();
        Ok(json!({
            "seed": seed,
            "attempts": r.attempts,
            "ghk": full["ghk"],
            "zeta": full["zeta"],
            "base_point_count": r.base.count,
            "double_points": r.base.double_points,
            "triple_points": r.base.triple_points,
            "H_degree": full["H_degree"],
            "lines": full["H_lines"],
            "fiber": full["fiber"],
            "multiple_fiber": full["multiple_fiber"],
            "S": full["S"],
            "invariants": full["invariants"],
        }))
    })())
}

#[wasm_bindgen]
pub fn classify(genus: u32, marks: &str) -> String {
    classify_json(genus, marks)
}

#[wasm_bindgen]
pub fn enumerate(marks: &str, height: u32, exclude: &str) -> String {
    enumerate_json(marks, height as u64, exclude)
}

/// Seeds are passed as numbers from JS, so they stay below 2^32 here.
#[wasm_bindgen]
pub fn sextic(seed: u32) -> String {
    sextic_json(seed as u64)
}
