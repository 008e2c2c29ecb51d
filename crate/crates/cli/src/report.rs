//! Output artifacts and their CSV / JSON encodings.
//!
//! CSV reals carry 12 significant digits. JSON reals are written in full
//! (shortest round-trip form). Object keys are emitted in sorted order.

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) => Value::from(*x),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// What a command produces before it is encoded.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Table(Table),
    Document(Value),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Report {
    /// Tables default to CSV, documents to JSON.
    pub fn default_format(&self) -> Format {
        match self {
            Report::Table(_) => Format::Csv,
            Report::Document(_) => Format::Json,
        }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match (self, format) {
            (Report::Table(t), Format::Csv) => {
                let rows = t.rows.iter().map(|r| r.iter().map(Cell::to_csv).collect());
                write_csv(&t.columns, rows)
            }
            (Report::Table(t), Format::Json) => {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
                    .collect();
                let mut doc = Map::new();
                doc.insert("columns".into(), Value::from(t.columns.clone()));
                doc.insert("rows".into(), Value::Array(rows));
                encode_json(&Value::Object(doc))
            }
            (Report::Document(v), Format::Json) => encode_json(v),
            (Report::Document(v), Format::Csv) => {
                let mut flat = Vec::new();
                flatten("", v, &mut flat);
                let columns = ["key".to_string(), "value".to_string()];
                write_csv(&columns, flat.into_iter().map(|(k, v)| vec![k, v]))
            }
        }
    }
}

fn encode_json(v: &Value) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Encode(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_csv(columns: &[String], rows: impl Iterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let enc = |e: csv::Error| CliError::Encode(e.to_string());
    w.write_record(columns).map_err(enc)?;
    for row in rows {
        w.write_record(&row).map_err(enc)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
}

/// Dotted key paths (`result.best_plan.rows.0`) for a CSV view of a document.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Number(n) => {
            let s = match (n.as_i64(), n.as_f64()) {
                (Some(i), _) => i.to_string(),
                (None, Some(x)) => format_real(x),
                _ => n.to_string(),
            };
            out.push((prefix.to_string(), s));
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

/// `x` with 12 significant digits, trailing zeros dropped. Plain notation
/// for `1e-5 ≤ |x| < 1e15`, scientific otherwise.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{e}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
