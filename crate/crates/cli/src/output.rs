//! Tables rendered as CSV or as a `{config, rows, summary}` JSON object.

use std::io::Write as _;
use std::path::Path;

use lmg_core::SpinJ;
use serde_json::{Map, Value};

use crate::args::FormatArg;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Spin(SpinJ),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => float(*x),
            Cell::Spin(j) => spin(*j),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => json_float(*x),
            Cell::Spin(j) => json_float(j.j()),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Shortest decimal that round-trips to the same `f64`.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

/// `J` as a decimal: `2`, `1.5`.
pub fn spin(j: SpinJ) -> String {
    half_integer(j.two_j() as i64)
}

/// `n / 2` as a decimal: `-3`, `2.5`.
pub fn half_integer(twice: i64) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        let sign = if twice < 0 { "-" } else { "" };
        format!("{sign}{}.5", twice.abs() / 2)
    }
}

/// Non-finite values have no JSON number; they become strings.
pub fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::from(float(x)))
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let written = w.write_record(&self.columns).and_then(|_| {
            self.rows
                .iter()
                .try_for_each(|row| w.write_record(row.iter().map(Cell::csv)))
        });
        written.expect("writing CSV to memory cannot fail");
        let bytes = w.into_inner().expect("flushing CSV to memory cannot fail");
        String::from_utf8(bytes).expect("CSV cells are UTF-8")
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

pub struct Report {
    pub config: Value,
    pub table: Table,
    pub summary: Value,
}

impl Report {
    pub fn render(&self, format: FormatArg) -> String {
        match format {
            FormatArg::Csv => self.table.to_csv(),
            FormatArg::Json => {
                let mut obj = Map::new();
                obj.insert("config".into(), self.config.clone());
                obj.insert("rows".into(), self.table.json_rows());
                obj.insert("summary".into(), self.summary.clone());
                let mut text = serde_json::to_string_pretty(&Value::Object(obj))
                    .expect("serializing a JSON value cannot fail");
                text.push('\n');
                text
            }
        }
    }
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::usage(format!("cannot write to standard output: {e}")))
        }
    }
}
