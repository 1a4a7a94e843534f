//! Deterministic tabular output: CSV with a config-echo comment line, or
//! a JSON document with the same rows. All floats are printed (and, for
//! JSON, rounded) to 12 significant digits so identical configurations
//! produce byte-identical artifacts.

use serde_json::{json, Map, Value};

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    /// Float, rendered with 12 significant digits.
    F(f64),
    /// Unsigned integer.
    U(usize),
    /// Free-form string (must not contain commas or newlines).
    S(String),
    /// Boolean, rendered as `true`/`false`.
    B(bool),
    /// Missing value: empty CSV field, JSON `null`.
    Empty,
}

impl Cell {
    /// Optional float: `Empty` when absent.
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F)
    }
}

/// Formats a float with 12 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.11e}")
}

/// Rounds a float to 12 significant digits (used for JSON output so both
/// formats carry identical numeric content).
fn round_sig(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    fmt_f64(v).parse().unwrap_or(v)
}

/// A rendered result table: named columns, ordered rows, and extra
/// comment lines carried alongside the config echo.
#[derive(Debug, Clone)]
pub struct Table {
    /// Column names, in output order.
    pub columns: Vec<&'static str>,
    /// Row data; each row has exactly `columns.len()` cells.
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key=value` annotations (CSV comment lines / JSON fields).
    pub notes: Vec<(String, String)>,
}

impl Table {
    /// Empty table with the given column set.
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Appends one row, checking its arity.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        self.rows.push(row);
    }

    /// Adds a `key=value` annotation.
    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    /// CSV rendering: `# config: ...` comment, one comment per note, a
    /// header row, then the data rows. UTF-8, LF endings.
    pub fn to_csv(&self, config_echo: &str) -> String {
        let mut out = String::new();
        out.push_str("# config: ");
        out.push_str(config_echo);
        out.push('\n');
        for (k, v) in &self.notes {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::F(v) => fmt_f64(*v),
                    Cell::U(v) => v.to_string(),
                    Cell::S(s) => s.clone(),
                    Cell::B(b) => b.to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON rendering: `{"config": ..., <notes...>, "rows": [...]}` with
    /// one object per row. Terminated by a single LF.
    pub fn to_json(&self, config_echo: &str) -> String {
        let mut doc = Map::new();
        doc.insert("config".into(), json!(config_echo));
        for (k, v) in &self.notes {
            doc.insert(k.clone(), json!(v));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::F(v) => json!(round_sig(*v)),
                        Cell::U(v) => json!(v),
                        Cell::S(s) => json!(s),
                        Cell::B(b) => json!(b),
                        Cell::Empty => Value::Null,
                    };
                    obj.insert((*name).into(), v);
                }
                Value::Object(obj)
            })
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serialization");
        s.push('\n');
        s
    }
}
