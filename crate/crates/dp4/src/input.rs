//! Pencil files: JSON with `Q0` and either `Q1` or `Qinf`, each given as 15
//! monomial coefficients or as a symmetric 5×5 Gram matrix. Rationals are
//! strings (`"-3/4"`); plain JSON integers are accepted too.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{parse_rat, Rat};
use crate::pencil::{Pencil, QuadraticForm5};

fn parse_entry(v: &Value, at: &str) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| Error::Parse(format!("{at}: {e}"))),
        Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap().into())),
        _ => Err(Error::Parse(format!("{at}: expected a rational string"))),
    }
}

fn parse_form(v: &Value, key: &str) -> Result<QuadraticForm5> {
    let Value::Array(items) = v else {
        return Err(Error::Parse(format!("{key}: expected an array")));
    };
    if items.iter().all(Value::is_array) {
        if items.len() != 5 {
            return Err(Error::Parse(format!("{key}: Gram matrix must have 5 rows")));
        }
        let mut m = Vec::with_capacity(5);
        for (i, row) in items.iter().enumerate() {
            let row = row.as_array().unwrap();
            if row.len() != 5 {
                return Err(Error::Parse(format!("{key}[{i}]: expected 5 entries")));
            }
            let r: Result<Vec<Rat>> = row.iter().enumerate().map(|(j, x)| parse_entry(x, &format!("{key}[{i}][{j}]"))).collect();
            m.push(r?);
        }
        return QuadraticForm5::from_gram(&m).map_err(|e| Error::Parse(format!("{key}: {e}")));
    }
    if items.len() != 15 {
        return Err(Error::Parse(format!("{key}: expected 15 coefficients, got {}", items.len())));
    }
    let c: Result<Vec<Rat>> = items.iter().enumerate().map(|(i, x)| parse_entry(x, &format!("{key}[{i}]"))).collect();
    QuadraticForm5::from_coeffs(&c?)
}

/// Parses a pencil file and normalizes it.
pub fn parse_pencil(text: &str) -> Result<Pencil> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let Value::Object(obj) = &v else {
        return Err(Error::Parse("top level must be an object".into()));
    };
    let q0 = parse_form(obj.get("Q0").ok_or_else(|| Error::Parse("missing key Q0".into()))?, "Q0")?;
    let pencil = match (obj.get("Q1"), obj.get("Qinf")) {
        (Some(q1), None) => Pencil::normalize(&q0, &parse_form(q1, "Q1")?)?,
        (None, Some(qi)) => Pencil::from_qinf(&q0, &parse_form(qi, "Qinf")?)?,
        (Some(_), Some(_)) => return Err(Error::Parse("give exactly one of Q1 and Qinf".into())),
        (None, None) => return Err(Error::Parse("missing key Q1 (or Qinf)".into())),
    };
    Ok(match obj.get("label").and_then(Value::as_str) {
        Some(l) => pencil.with_label(l),
        None => pencil,
    })
}

/// Serializes a pencil back to the file format (with `Qinf`).
pub fn pencil_to_json(p: &Pencil) -> Value {
    let strs = |q: &QuadraticForm5| Value::Array(q.coeffs().iter().map(|c| Value::String(c.to_string())).collect());
    let mut obj = serde_json::Map::new();
    if let Some(l) = &p.label {
        obj.insert("label".into(), Value::String(l.clone()));
    }
    obj.insert("Q0".into(), strs(p.q0()));
    obj.insert("Qinf".into(), strs(p.qinf()));
    Value::Object(obj)
}
