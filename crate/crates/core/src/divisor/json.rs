use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::TorusDivisor;
use crate::error::{Error, Result};
use crate::lattice::{format_rat, parse_rat, rat, Rat};

/// Parses `{"coeffs": [...]}` where entries are integers or `"p/q"` strings.
pub fn divisor_from_json(text: &str) -> Result<TorusDivisor> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("missing \"coeffs\" array".into()))?;
    let parsed = coeffs
        .iter()
        .map(|c| match c {
            Value::Number(n) => n.as_i64().map(rat),
            Value::String(s) => parse_rat(s),
            _ => None,
        })
        .collect::<Option<Vec<Rat>>>()
        .ok_or_else(|| Error::Json("coefficients must be integers or \"p/q\" strings".into()))?;
    Ok(TorusDivisor::new(parsed))
}

pub fn divisor_to_json(d: &TorusDivisor) -> Value {
    let coeffs: Vec<Value> = d
        .coeffs()
        .iter()
        .map(|c| match c.is_integer().then(|| c.to_integer().to_i64()).flatten() {
            Some(i) => json!(i),
            None => json!(format_rat(c)),
        })
        .collect();
    json!({ "coeffs": coeffs })
}
