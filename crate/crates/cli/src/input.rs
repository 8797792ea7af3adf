//! Reading matrices and torsion data from JSON documents or inline text.
//!
//! A matrix is accepted as `{"rows": r, "cols": c, "data": [[..], ..]}`, as a
//! bare array of rows, or as a string such as `"1 0 -1; 0 1 -1"`. Integers
//! may be JSON numbers or decimal strings.

use std::io::Read;

use num_bigint::BigInt;
use serde_json::Value;
use torifactor::{IntMatrix, TorsionMatrix};

use crate::CliError;

pub fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Parses a document: JSON when possible, otherwise an inline matrix.
pub fn parse_document(text: &str) -> Result<Value, CliError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(CliError::Malformed("empty input".into()));
    }
    match serde_json::from_str(trimmed) {
        Ok(v) => Ok(v),
        Err(json_err) => {
            if trimmed.starts_with('{') || trimmed.starts_with('[') {
                return Err(CliError::Malformed(format!("invalid JSON: {json_err}")));
            }
            parse_inline(trimmed)?;
            Ok(Value::String(trimmed.to_string()))
        }
    }
}

fn parse_integer(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(i.into())
            } else if let Some(u) = n.as_u64() {
                Ok(u.into())
            } else {
                Err(CliError::Malformed(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => parse_token(s),
        other => Err(CliError::Malformed(format!("{other} is not an integer"))),
    }
}

fn parse_token(s: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Malformed(format!("{s:?} is not an integer")))
}

fn parse_inline(text: &str) -> Result<IntMatrix, CliError> {
    let rows = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(parse_token)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(CliError::Malformed("empty matrix".into()));
    }
    Ok(IntMatrix::try_from_rows(rows)?)
}

fn parse_rows(data: &Value) -> Result<IntMatrix, CliError> {
    let rows = data
        .as_array()
        .ok_or_else(|| CliError::Malformed("matrix data must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| CliError::Malformed("matrix row must be an array".into()))?
                .iter()
                .map(parse_integer)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::try_from_rows(rows)?)
}

fn declared(obj: &serde_json::Map<String, Value>, key: &str) -> Result<Option<usize>, CliError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| CliError::Malformed(format!("\"{key}\" must be a non-negative integer"))),
    }
}

pub fn matrix(v: &Value) -> Result<IntMatrix, CliError> {
    match v {
        Value::String(s) => parse_inline(s),
        Value::Array(_) => parse_rows(v),
        Value::Object(obj) => {
            let data = obj
                .get("data")
                .ok_or_else(|| CliError::Malformed("matrix object needs \"data\"".into()))?;
            let rows = declared(obj, "rows")?;
            let cols = declared(obj, "cols")?;
            let m = if data.as_array().is_some_and(Vec::is_empty) {
                IntMatrix::zeros(rows.unwrap_or(0), cols.unwrap_or(0))
            } else {
                parse_rows(data)?
            };
            if rows.is_some_and(|r| r != m.rows()) || cols.is_some_and(|c| c != m.cols()) {
                return Err(CliError::Malformed(format!(
                    "declared shape does not match {}x{} data",
                    m.rows(),
                    m.cols()
                )));
            }
            Ok(m)
        }
        other => Err(CliError::Malformed(format!("expected a matrix, got {other}"))),
    }
}

pub fn torsion(v: &Value) -> Result<TorsionMatrix, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Malformed("torsion matrix must be an object".into()))?;
    let moduli = obj
        .get("moduli")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Malformed("torsion matrix needs a \"moduli\" array".into()))?
        .iter()
        .map(parse_integer)
        .collect::<Result<Vec<_>, _>>()?;
    let data = obj
        .get("data")
        .or_else(|| obj.get("entries"))
        .ok_or_else(|| CliError::Malformed("torsion matrix needs \"data\"".into()))?;
    let entries = if data.as_array().is_some_and(Vec::is_empty) {
        let cols = declared(obj, "cols")?
            .ok_or_else(|| CliError::Malformed("empty torsion matrix needs \"cols\"".into()))?;
        IntMatrix::zeros(0, cols)
    } else {
        matrix(data)?
    };
    if entries.rows() != moduli.len() {
        return Err(CliError::Malformed(format!(
            "{} moduli for {} torsion rows",
            moduli.len(),
            entries.rows()
        )));
    }
    Ok(TorsionMatrix::new(moduli, entries)?)
}

/// The first of `names` present in an object document.
pub fn field<'a>(doc: &'a Value, names: &[&str]) -> Option<&'a Value> {
    doc.as_object()
        .and_then(|obj| names.iter().find_map(|n| obj.get(*n)))
}

/// The named matrix, or the whole document when it is itself a matrix.
pub fn main_matrix(doc: &Value, names: &[&str]) -> Result<IntMatrix, CliError> {
    match field(doc, names) {
        Some(v) => matrix(v),
        None if doc.is_object() && doc.get("data").is_none() => Err(CliError::Malformed(format!(
            "missing field {}",
            names.first().copied().unwrap_or("matrix")
        ))),
        None => matrix(doc),
    }
}

pub fn required_matrix(doc: &Value, names: &[&str]) -> Result<IntMatrix, CliError> {
    field(doc, names)
        .ok_or_else(|| CliError::Malformed(format!("missing field {}", names[0])))
        .and_then(matrix)
}

pub fn optional_matrix(doc: &Value, names: &[&str]) -> Result<Option<IntMatrix>, CliError> {
    field(doc, names).map(matrix).transpose()
}
