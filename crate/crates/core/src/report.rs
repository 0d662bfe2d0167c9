//! Machine-readable output.
//!
//! JSON documents carry a top-level `"schema": "screwsr/1"` key and are
//! emitted with sorted keys, so identical inputs give byte-identical files.
//! CSV uses `{:.16e}` for floats (17 significant digits, `.` decimal point)
//! and LF line endings.

use crate::error::{Result, ScrewError};
use serde::Serialize;
use serde_json::{Map, Value};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

pub const SCHEMA: &str = "screwsr/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = ScrewError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(ScrewError::Domain(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

/// `{"schema": "screwsr/1", "kind": kind, ...fields}` as pretty JSON with a
/// trailing newline.
pub fn json_document<T: Serialize>(kind: &str, body: &T) -> Result<String> {
    let mut map = Map::new();
    map.insert("schema".into(), Value::from(SCHEMA));
    map.insert("kind".into(), Value::from(kind));
    match serde_json::to_value(body).map_err(|e| ScrewError::Numeric(e.to_string()))? {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("data".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).map_err(|e| ScrewError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// A CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Float formatting shared by every CSV writer.
pub fn format_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn render(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => format_f64(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Empty => String::new(),
        Cell::Text(s) if s.contains([',', '"', '\n', '\r']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

/// Header line plus one line per row, each terminated by `\n`.
pub fn csv_table(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(render).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

/// Writes `content` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| ScrewError::Domain(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Body {
        zeta: f64,
        alpha: Vec<u8>,
    }

    #[test]
    fn json_has_schema_and_sorted_keys() {
        let s = json_document("demo", &Body { zeta: 0.1, alpha: vec![1] }).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["kind"], "demo");
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(s.ends_with("}\n"));
        let wrapped = json_document("list", &vec![1, 2]).unwrap();
        assert!(wrapped.contains("\"data\""));
    }

    #[test]
    fn csv_formatting() {
        let t = csv_table(&["a", "b", "c"], &[vec![0.1.into(), 3usize.into(), "x,y".into()]]);
        assert_eq!(t, "a,b,c\n1.0000000000000001e-1,3,\"x,y\"\n");
        assert!(!t.contains('\r'));
        let back: f64 = format_f64(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
        assert_eq!(format_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(render(&Cell::from(None::<f64>)), "");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("JSON".parse::<Format>().unwrap(), Format::Json);
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
