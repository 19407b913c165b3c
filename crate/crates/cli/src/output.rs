use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::args::Format;

/// Everything one invocation emits.
pub struct Report {
    pub inputs: BTreeMap<String, Value>,
    pub results: Value,
    pub diagnostics: BTreeMap<String, Value>,
    pub table: Table,
}

/// Tabular view of the results for CSV output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<Option<usize>> for Cell {
    fn from(x: Option<usize>) -> Self {
        x.map_or(Cell::Empty, |v| Cell::Int(v as u64))
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// `x` rounded to 12 significant digits, printed as the shortest string
/// that reads back to the rounded value.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float formatting");
    let a = rounded.abs();
    if a == 0.0 {
        "0".into()
    } else if (1e-4..1e12).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

impl Report {
    pub fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        match format {
            Format::Json => {
                let doc = json!({
                    "inputs": self.inputs,
                    "results": self.results,
                    "diagnostics": self.diagnostics,
                    "version": env!("CARGO_PKG_VERSION"),
                });
                let mut text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
                text.push('\n');
                Ok(text.into_bytes())
            }
            Format::Csv => self.table.to_csv(),
        }
    }
}

impl Table {
    fn to_csv(&self) -> Result<Vec<u8>, String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| e.to_string())?;
        for row in &self.rows {
            let fields = row.iter().map(|c| match c {
                Cell::Num(x) => sig12(*x),
                Cell::Int(i) => i.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            });
            w.write_record(fields).map_err(|e| e.to_string())?;
        }
        w.into_inner().map_err(|e| e.to_string())
    }
}

/// JSON number, `null` when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// `inf` spelled out, since JSON has no infinity.
pub fn num_or_inf(x: f64) -> Value {
    if x.is_infinite() {
        Value::String(if x > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        num(x)
    }
}
