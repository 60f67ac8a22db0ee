//! Canonical JSON encoding, digests and run manifests.
//!
//! Objects are emitted with sorted keys and rationals as `"p/q"` strings, so
//! equal results serialize to identical bytes.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::algebra::scalar::parse_q;
use crate::algebra::{BiPoly, Poly, Q};
use crate::error::{invalid, Result};

pub fn q_to_json(q: &Q) -> Value {
    Value::String(q.to_string())
}

pub fn q_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s).ok_or_else(|| invalid(format!("not a rational: {s}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Q::from_integer(i.into()))
            .ok_or_else(|| invalid(format!("not an integer: {n}"))),
        other => Err(invalid(format!("not a rational: {other}"))),
    }
}

/// Coefficients lowest degree first.
pub fn poly_to_json(p: &Poly<Q>) -> Value {
    Value::Array(p.coeffs().iter().map(q_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<Poly<Q>> {
    let arr = v.as_array().ok_or_else(|| invalid("polynomial must be a coefficient list"))?;
    Ok(Poly::new(arr.iter().map(q_from_json).collect::<Result<_>>()?))
}

/// Terms `[i, j, "p/q"]` for `c·x^i y^j`, in increasing `(i, j)` order.
pub fn bipoly_to_json(p: &BiPoly<Q>) -> Value {
    Value::Array(p.terms().map(|((i, j), c)| json!([i, j, q_to_json(c)])).collect())
}

pub fn bipoly_from_json(v: &Value) -> Result<BiPoly<Q>> {
    let arr = v.as_array().ok_or_else(|| invalid("bivariate polynomial must be a term list"))?;
    let mut terms = Vec::new();
    for t in arr {
        let idx = |k: usize| {
            t.get(k).and_then(Value::as_u64).map(|n| n as usize).ok_or_else(|| invalid(format!("bad term {t}")))
        };
        terms.push(((idx(0)?, idx(1)?), q_from_json(t.get(2).unwrap_or(&Value::Null))?));
    }
    Ok(BiPoly::from_terms(terms))
}

/// Recursively sorts object keys (a no-op with the default map, kept so the
/// encoding does not depend on serde_json feature flags).
fn canonicalize(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonicalize(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonicalize).collect()),
        other => other.clone(),
    }
}

/// Compact canonical encoding, used for digests.
pub fn canonical_string(v: &Value) -> String {
    serde_json::to_string(&canonicalize(v)).expect("json values serialize")
}

/// Indented canonical encoding with a trailing newline, used for files.
pub fn canonical_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(v)).expect("json values serialize");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest(v: &Value) -> String {
    sha256_hex(canonical_string(v).as_bytes())
}

/// Provenance attached to every output file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub input_digest: String,
    pub result_digest: String,
    pub timing_ms: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, input: &Value, result: &Value, seed: Option<u64>) -> Self {
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            input_digest: digest(input),
            result_digest: digest(result),
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = json!({
            "version": self.version,
            "command": self.command,
            "seed": self.seed,
            "input_digest": self.input_digest,
            "result_digest": self.result_digest,
        });
        if let Some(t) = self.timing_ms {
            m["timing_ms"] = json!(t);
        }
        m
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| invalid(format!("manifest field {k} missing")))
        };
        Ok(RunManifest {
            version: field("version")?,
            command: field("command")?,
            seed: v.get("seed").and_then(Value::as_u64),
            input_digest: field("input_digest")?,
            result_digest: field("result_digest")?,
            timing_ms: v.get("timing_ms").and_then(Value::as_u64),
        })
    }
}

/// `{"input": …, "result": …, "manifest": …}`.
pub fn envelope(command: &str, input: Value, result: Value, seed: Option<u64>) -> Value {
    let manifest = RunManifest::new(command, &input, &result, seed);
    json!({"input": input, "result": result, "manifest": manifest.to_json()})
}

/// Recomputes both digests of an envelope and compares with its manifest.
pub fn verify_envelope(v: &Value) -> Result<bool> {
    let input = v.get("input").ok_or_else(|| invalid("envelope needs \"input\""))?;
    let result = v.get("result").ok_or_else(|| invalid("envelope needs \"result\""))?;
    let manifest = RunManifest::from_json(v.get("manifest").ok_or_else(|| invalid("envelope needs \"manifest\""))?)?;
    Ok(manifest.input_digest == digest(input) && manifest.result_digest == digest(result))
}
