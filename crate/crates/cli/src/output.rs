//! JSON encoding of results and a plain-text rendering of the same values.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use torifactor::{IntMatrix, TorsionMatrix};

const SAFE: i64 = 1 << 53;

/// A JSON number when exactly representable as an IEEE double, else a string.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() < SAFE => json!(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.row_iter().map(ints).collect::<Vec<_>>(),
    })
}

pub fn torsion(t: &TorsionMatrix) -> Value {
    json!({
        "rows": t.entries().rows(),
        "cols": t.entries().cols(),
        "moduli": ints(t.moduli()),
        "data": t.entries().row_iter().map(ints).collect::<Vec<_>>(),
    })
}

/// Cone index sets shifted to 1-based labels.
pub fn cones(cones: &[Vec<usize>]) -> Value {
    json!(cones
        .iter()
        .map(|c| c.iter().map(|i| i + 1).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn is_matrix(obj: &Map<String, Value>) -> bool {
    obj.contains_key("rows") && obj.contains_key("cols") && obj.contains_key("data")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn matrix_lines(obj: &Map<String, Value>, indent: usize, out: &mut String) {
    let rows: Vec<Vec<String>> = obj["data"]
        .as_array()
        .map(|rs| {
            rs.iter()
                .map(|r| r.as_array().map(|xs| xs.iter().map(scalar).collect()).unwrap_or_default())
                .collect()
        })
        .unwrap_or_default();
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    let moduli: Option<Vec<String>> = obj
        .get("moduli")
        .and_then(Value::as_array)
        .map(|m| m.iter().map(scalar).collect());
    if rows.is_empty() {
        let _ = writeln!(out, "{:indent$}(empty {}x{})", "", obj["rows"], obj["cols"]);
    }
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        let _ = write!(out, "{:indent$}[ {} ]", "", cells.join(" "));
        if let Some(m) = &moduli {
            let _ = write!(out, " mod {}", m[i]);
        }
        out.push('\n');
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Object(obj) if is_matrix(obj) => matrix_lines(obj, indent, out),
        Value::Object(obj) => {
            for (k, x) in obj {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        let _ = writeln!(out, "{:indent$}{k}:", "");
                        render(x, indent + 2, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{:indent$}{k}: {}", "", inline(x));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                if is_flat(x) {
                    let _ = writeln!(out, "{:indent$}- {}", "", inline(x));
                } else {
                    let _ = writeln!(out, "{:indent$}[{}]", "", i + 1);
                    render(x, indent + 2, out);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{:indent$}{}", "", scalar(other));
        }
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_object() && (!x.is_array() || is_flat(x))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = indent + 2;
    match v {
        Value::Object(obj) if !obj.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in obj.iter().enumerate() {
                let _ = write!(out, "{:pad$}{}: ", "", Value::String(k.clone()));
                write_json(x, pad, out);
                out.push_str(if i + 1 < obj.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{:indent$}}}", "");
        }
        Value::Array(xs) if !is_flat(v) || xs.iter().any(Value::is_array) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                let _ = write!(out, "{:pad$}", "");
                write_json(x, pad, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{:indent$}]", "");
        }
        other => out.push_str(&serde_json::to_string(other).expect("values serialize")),
    }
}

/// Indented JSON with every innermost array kept on one line.
pub fn json_text(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, 0, &mut out);
    out.push('\n');
    out
}

/// Human-readable rendering; a lone scalar prints as itself.
pub fn plain(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}
