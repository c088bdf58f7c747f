//! Tables, number formatting and the JSON report bundle.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use leraykit::certificate::Certificate;
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => {
                serde_json::from_str(&fmt_num(*x)).unwrap_or(Value::Null)
            }
            Cell::Num(x) => Value::String(fmt_num(*x)),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub description: &'static str,
}

pub const fn col(name: &'static str, description: &'static str) -> Column {
    Column { name, description }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        s.push_str(&header.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        serde_json::json!({ "name": self.name, "columns": self.columns, "rows": rows })
    }
}

/// Decimal with 15 significant digits; scientific outside `[1e-5, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-5..1e15).contains(&a) {
        let exp = a.log10().floor() as i32;
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(s)
    } else {
        let s = format!("{x:.14e}");
        match s.split_once('e') {
            Some((m, e)) => format!("{}e{e}", trim_zeros(m.to_string())),
            None => s,
        }
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Serialize)]
pub struct Bundle<'a> {
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub certificates: &'a [Certificate],
    pub tables: Vec<Value>,
}

pub fn bundle_json(cfg: &RunConfig, certificates: &[Certificate], tables: &[Table]) -> String {
    let b = Bundle {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        certificates,
        tables: tables.iter().map(Table::to_json).collect(),
    };
    let mut s = serde_json::to_string_pretty(&b).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"));
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
            }
            fs::write(p, text).map_err(|e| CliError::Io(format!("writing {}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("writing stdout: {e}")))
        }
    }
}

/// A single table in the configured format.
pub fn emit_table(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    let text = match cfg.format {
        crate::config::Format::Csv => table.to_csv(),
        crate::config::Format::Json => bundle_json(cfg, &[], std::slice::from_ref(table)),
    };
    emit(cfg.out.as_deref(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(fmt_num(-0.125), "-0.125");
        assert_eq!(fmt_num(1.2533141373155003), "1.2533141373155");
        assert_eq!(fmt_num(2.5e-9), "2.5e-9");
        assert_eq!(fmt_num(123456.0), "123456");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("t", vec![col("a", ""), col("b", "")]);
        t.push(vec![Cell::Int(1), Cell::Text("x,y".into())]);
        assert_eq!(t.to_csv(), "a,b\n1,\"x,y\"\n");
    }
}
