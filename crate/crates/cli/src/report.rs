//! Command results rendered as text, CSV or JSON.

use std::io::Write;

use clap::ValueEnum;
use plurival_core::lattice::Rational;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub struct Report {
    pub text: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Report {
    /// A single exact value.
    pub fn scalar(name: &'static str, value: &Rational, extra: Value) -> Report {
        let mut json = json!({ name: exact(value) });
        if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
            m.extend(e);
        }
        Report {
            text: value.to_string(),
            columns: vec!["value".into(), "decimal".into()],
            rows: vec![vec![value.to_string(), decimal(value.to_f64())]],
            json,
        }
    }

    /// Top-level fields of the JSON value as `key,value` rows.
    pub fn fields(text: String, json: Value) -> Report {
        let rows = match &json {
            Value::Object(m) => m
                .iter()
                .map(|(k, v)| {
                    let cell = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    vec![k.clone(), cell]
                })
                .collect(),
            _ => vec![vec!["value".into(), json.to_string()]],
        };
        Report {
            text,
            columns: vec!["key".into(), "value".into()],
            rows,
            json,
        }
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        match format {
            Format::Text => Ok(format!("{}\n", self.text.trim_end()).into_bytes()),
            Format::Json => serde_json::to_vec_pretty(&self.json)
                .map(|mut v| {
                    v.push(b'\n');
                    v
                })
                .map_err(|e| e.to_string()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).map_err(|e| e.to_string())?;
                for r in &self.rows {
                    w.write_record(r).map_err(|e| e.to_string())?;
                }
                w.flush().map_err(|e| e.to_string())?;
                w.into_inner().map_err(|e| e.to_string())
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&str>) -> Result<(), String> {
        let bytes = self.render(format)?;
        match out {
            Some(path) => std::fs::write(path, bytes).map_err(|e| format!("cannot write {path}: {e}")),
            None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
        }
    }
}

/// Exact and decimal renderings of a rational.
pub fn exact(r: &Rational) -> Value {
    json!({ "exact": r.to_string(), "decimal": r.to_f64() })
}

pub fn exact_list(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(exact).collect())
}

/// Shortest round-trip rendering, which is deterministic.
pub fn decimal(x: f64) -> String {
    format!("{x:?}")
}
