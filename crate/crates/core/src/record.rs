//! Flat JSON / CSV rendering shared by all report types.
//!
//! A record is any `Serialize` type that maps to a flat JSON object of
//! scalars. Its CSV header is the object's key order and each cell is the
//! scalar rendered exactly as `serde_json` renders it, so the JSON and CSV
//! views of a record carry the same digits.

use serde::Serialize;
use serde_json::{Map, Value};
use std::io::{self, Write};

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("record is not a flat JSON object")]
    NotFlat,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Serializes `record` into an ordered key/value map.
pub fn to_map<T: Serialize>(record: &T) -> Result<Map<String, Value>, RecordError> {
    match serde_json::to_value(record)? {
        Value::Object(map) if map.values().all(|v| !v.is_object() && !v.is_array()) => Ok(map),
        _ => Err(RecordError::NotFlat),
    }
}

/// Renders a scalar JSON value as a CSV cell.
pub fn cell(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Merges several flat records into one, in argument order.
pub fn merge(maps: impl IntoIterator<Item = Map<String, Value>>) -> Map<String, Value> {
    maps.into_iter().flatten().collect()
}

/// Writes `rows` as CSV with a header taken from the first row's keys.
pub fn write_csv<W: Write>(mut out: W, rows: &[Map<String, Value>]) -> Result<(), RecordError> {
    if let Some(first) = rows.first() {
        writeln!(
            out,
            "{}",
            first.keys().cloned().collect::<Vec<_>>().join(",")
        )?;
    }
    for row in rows {
        let cells: Vec<String> = row.values().map(cell).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Formats `x` with six significant digits for console output.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}
