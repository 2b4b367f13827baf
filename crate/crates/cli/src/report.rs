//! Report tables, the run manifest, and their CSV/JSON renderings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use swkb_core::report::fmt_real;

use crate::args::Format;
use crate::error::CliError;

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command line after the program name.
    pub args: Vec<String>,
    pub spec_overrides: BTreeMap<String, f64>,
    pub config: Value,
    pub timestamp: String,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, args: &[String]) -> Self {
        Self {
            command: command.to_string(),
            args: args.to_vec(),
            spec_overrides: BTreeMap::new(),
            config: Value::Null,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Int(i) => Value::from(*i),
            Cell::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

/// A table plus optional structured detail that only the JSON form carries.
#[derive(Debug, Clone)]
pub struct Report {
    pub manifest: RunManifest,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub detail: Option<Value>,
}

impl Report {
    pub fn new(manifest: RunManifest, columns: &[&'static str]) -> Self {
        Self { manifest, columns: columns.to_vec(), rows: Vec::new(), detail: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// The part of the output that must be reproducible.
    pub fn body(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).map_err(CliError::io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(CliError::io)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::io(e.into_error()))?;
                String::from_utf8(bytes).map_err(CliError::io)
            }
            Format::Json => {
                let v = json!({ "rows": self.json_rows(), "detail": self.detail.clone().unwrap_or(Value::Null) });
                serde_json::to_string_pretty(&v).map_err(CliError::io)
            }
        }
    }

    fn json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let obj = self.columns.iter().zip(row).map(|(k, c)| (k.to_string(), c.json())).collect();
                Value::Object(obj)
            })
            .collect()
    }

    /// Full output: manifest header line (CSV) or field (JSON) plus body.
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let manifest = serde_json::to_string(&self.manifest).map_err(CliError::io)?;
        match format {
            Format::Csv => Ok(format!("# manifest: {manifest}\n{}", self.body(format)?)),
            Format::Json => {
                let v = json!({
                    "manifest": self.manifest,
                    "rows": self.json_rows(),
                    "detail": self.detail.clone().unwrap_or(Value::Null),
                });
                Ok(serde_json::to_string_pretty(&v).map_err(CliError::io)? + "\n")
            }
        }
    }
}

/// Splits a rendered report into its manifest and body.
pub fn parse_rendered(text: &str) -> Result<(RunManifest, Format, String), CliError> {
    if let Some(rest) = text.strip_prefix("# manifest: ") {
        let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
        let manifest = serde_json::from_str(line).map_err(|e| CliError::invalid(format!("bad manifest line: {e}")))?;
        return Ok((manifest, Format::Csv, body.to_string()));
    }
    let mut v: Value = serde_json::from_str(text).map_err(|e| CliError::invalid(format!("not a report: {e}")))?;
    let manifest = v
        .as_object_mut()
        .and_then(|o| o.remove("manifest"))
        .ok_or_else(|| CliError::invalid("report has no manifest"))?;
    let manifest = serde_json::from_value(manifest).map_err(|e| CliError::invalid(format!("bad manifest: {e}")))?;
    let body = serde_json::to_string_pretty(&v).map_err(CliError::io)?;
    Ok((manifest, Format::Json, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(RunManifest::new("verify", &["verify".into()]), &["name", "n", "value", "note"]);
        r.push(vec!["a,b".into(), 3usize.into(), 0.1.into(), Cell::Empty]);
        r
    }

    #[test]
    fn csv_quotes_and_formats() {
        let body = sample().body(Format::Csv).unwrap();
        assert_eq!(body, "name,n,value,note\n\"a,b\",3,1.0000000000000001e-1,\n");
    }

    #[test]
    fn rendered_reports_split_back() {
        for format in [Format::Csv, Format::Json] {
            let r = sample();
            let (m, f, body) = parse_rendered(&r.render(format).unwrap()).unwrap();
            assert_eq!(m, r.manifest);
            assert_eq!(f, format);
            assert_eq!(body, r.body(format).unwrap());
        }
    }
}
