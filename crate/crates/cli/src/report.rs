//! Tabular reports and their JSON and CSV encodings.
//!
//! Floats are written with 17 significant digits and a signed exponent, so identical
//! inputs give byte-identical output. Non-finite floats become `null` in JSON
//! and empty fields in CSV.

use std::str::FromStr;

use sds_core::ModelParams;
use serde_json::{Map, Number, Value};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Floating-point value.
    Float(f64),
    /// Integer value.
    Int(i64),
    /// Free text.
    Text(String),
    /// Boolean flag.
    Bool(bool),
    /// Missing value.
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits with a signed exponent, shared by both encodings.
pub fn format_float(v: f64) -> Option<String> {
    if !v.is_finite() {
        return None;
    }
    let s = format!("{v:.16e}");
    Some(match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    })
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Float(v) => match format_float(*v) {
                Some(s) => Value::Number(Number::from_str(&s).expect("formatted float is valid JSON")),
                None => Value::Null,
            },
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Null => Value::Null,
        }
    }

    fn to_field(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v).unwrap_or_default(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

/// Ordered `(column, value)` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row(pub Vec<(&'static str, Cell)>);

impl Row {
    /// Empty row.
    pub fn new() -> Self {
        Row(Vec::new())
    }

    /// Appends a column.
    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    /// Looks up a column.
    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }
}

/// Parameters echoed in the report header; unused ones are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamsMeta {
    /// Minimal-momentum deformation.
    pub alpha: Option<f64>,
    /// Minimal-length deformation.
    pub beta: Option<f64>,
    /// Gauge parameter.
    pub lambda: Option<f64>,
    /// Mass.
    pub m: Option<f64>,
    /// Oscillator frequency.
    pub omega: Option<f64>,
}

impl From<&ModelParams> for ParamsMeta {
    fn from(p: &ModelParams) -> Self {
        ParamsMeta {
            alpha: Some(p.alpha),
            beta: Some(p.beta),
            lambda: Some(p.lambda),
            m: Some(p.m),
            omega: Some(p.omega),
        }
    }
}

/// Report header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Meta {
    /// Subcommand name.
    pub command: &'static str,
    /// Physical parameters.
    pub params: ParamsMeta,
    /// Branch the rows refer to.
    pub branch: Option<String>,
    /// Grid size used.
    pub grid: Option<usize>,
}

/// A complete command result.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    /// Header.
    pub meta: Meta,
    /// Table body.
    pub rows: Vec<Row>,
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// `{meta, rows}` object.
    Json,
    /// Header line plus one line per row.
    Csv,
}

fn opt_float(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| Cell::Float(x).to_json())
}

impl Report {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let p = &self.meta.params;
        let mut params = Map::new();
        params.insert("alpha".into(), opt_float(p.alpha));
        params.insert("beta".into(), opt_float(p.beta));
        params.insert("lambda".into(), opt_float(p.lambda));
        params.insert("m".into(), opt_float(p.m));
        params.insert("omega".into(), opt_float(p.omega));
        let mut meta = Map::new();
        meta.insert("command".into(), Value::String(self.meta.command.into()));
        meta.insert("params".into(), Value::Object(params));
        meta.insert(
            "branch".into(),
            self.meta.branch.clone().map_or(Value::Null, Value::String),
        );
        meta.insert("grid".into(), self.meta.grid.map_or(Value::Null, Value::from));
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(r.0.iter().map(|(k, v)| ((*k).to_owned(), v.to_json())).collect()))
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(meta));
        top.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
        out.push('\n');
        out
    }

    /// CSV with a header taken from the first row; empty body when there are no rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.rows.first() {
            w.write_record(first.0.iter().map(|(k, _)| *k))
                .expect("in-memory write");
        }
        for row in &self.rows {
            w.write_record(row.0.iter().map(|(_, v)| v.to_field()))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
    }

    /// Encodes in `format`.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            meta: Meta {
                command: "spectrum",
                params: ParamsMeta {
                    alpha: Some(0.04),
                    ..ParamsMeta::default()
                },
                branch: Some("ZeroGS".into()),
                grid: None,
            },
            rows: vec![
                Row::new().with("n", 0u32).with("value", 4.64).with("ok", true),
                Row::new().with("n", 1u32).with("value", f64::NAN).with("ok", false),
            ],
        }
    }

    #[test]
    fn json_layout() {
        let text = sample().to_json();
        assert!(text.contains("\"value\": 4.6399999999999997e+0"));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["meta"]["branch"], "ZeroGS");
        assert!(v["meta"]["grid"].is_null());
        assert!(v["meta"]["params"]["beta"].is_null());
        assert!(v["rows"][1]["value"].is_null());
        assert_eq!(v["rows"][0]["n"], 0);
        let keys: Vec<&String> = v["rows"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["n", "value", "ok"]);
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv();
        assert_eq!(text, "n,value,ok\n0,4.6399999999999997e+0,true\n1,,false\n");
        assert_eq!(Report::default().to_csv(), "");
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -2.5e-300, 1.0 / 3.0, 6.02e23, -0.0] {
            let s = format_float(v).unwrap();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(format_float(f64::INFINITY), None);
        assert_eq!(format_float(1.0).unwrap(), "1.0000000000000000e+0");
        assert_eq!(format_float(-1e-5).unwrap(), "-1.0000000000000001e-5");
    }
}
