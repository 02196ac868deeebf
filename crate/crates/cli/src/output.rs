use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use hilbert_lab::Result;
use serde_json::{Map, Value};

pub const SCHEMA: u64 = 1;

/// Floats at 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    U(u64),
    S(String),
    B(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::U(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::U(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::F)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::U(x) => x.to_string(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => Value::from(*x),
            Cell::U(x) => Value::from(*x),
            Cell::S(s) => Value::from(s.as_str()),
            Cell::B(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// One command's result: a table plus named summary values.
pub struct Report {
    pub command: String,
    pub config: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Map<String, Value>,
    /// A standalone document written verbatim in place of the table.
    pub raw: Option<String>,
}

impl Report {
    pub fn new(command: &str, config: Value, columns: &[&'static str]) -> Self {
        Self { command: command.into(), config, columns: columns.to_vec(), rows: Vec::new(), summary: Map::new(), raw: None }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn set(&mut self, key: &str, value: impl serde::Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.summary.insert(key.into(), v);
    }

    pub fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("schema".into(), SCHEMA.into());
        doc.insert("command".into(), self.command.clone().into());
        doc.insert("config".into(), self.config.clone());
        doc.insert("summary".into(), Value::Object(self.summary.clone()));
        doc.insert("columns".into(), self.columns.iter().map(|c| Value::from(*c)).collect());
        doc.insert(
            "rows".into(),
            self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect(),
        );
        let mut out = String::new();
        write_json(&mut out, &Value::Object(doc), 0);
        out.push('\n');
        out
    }

    /// Summary lines for stderr alongside CSV output.
    pub fn summary_lines(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.summary {
            let mut s = String::new();
            write_json(&mut s, v, usize::MAX);
            let _ = writeln!(out, "# {k} = {s}");
        }
        out
    }
}

/// Pretty JSON with floats at 17 significant digits. `indent == usize::MAX` writes one line.
pub fn write_json(out: &mut String, v: &Value, indent: usize) {
    let compact = indent == usize::MAX;
    let pad = |n: usize| if compact { String::new() } else { "  ".repeat(n) };
    let inner = if compact { indent } else { indent + 1 };
    let (nl, sep) = if compact { ("", ", ") } else { ("\n", ",\n") };
    match v {
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => out.push_str(&u.to_string()),
            (_, Some(i), _) => out.push_str(&i.to_string()),
            (_, _, Some(f)) => out.push_str(&fmt_f64(f)),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push('[');
            for (k, i) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_json(out, i, usize::MAX);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            out.push_str(nl);
            for (k, i) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                out.push_str(&pad(inner));
                write_json(out, i, inner);
            }
            out.push_str(nl);
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            out.push_str(nl);
            for (k, (key, i)) in map.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                out.push_str(&pad(inner));
                out.push_str(&Value::from(key.as_str()).to_string());
                out.push_str(": ");
                write_json(out, i, inner);
            }
            out.push_str(nl);
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
