use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// Shortest string that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Ordered `key=value` metadata shared by CSV headers and JSON `meta` blocks.
#[derive(Debug, Clone, Default)]
pub struct Meta(Vec<(String, Value)>);

impl Meta {
    pub fn new(command: &str) -> Self {
        let mut m = Self::default();
        m.push("version", cespdc::VERSION);
        m.push("command", command);
        m
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key.to_owned(), value.into()));
        self
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().cloned().collect::<Map<_, _>>())
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.0 {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
                other => other.to_string(),
            };
            writeln!(out, "# {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    U(u64),
    I(i64),
    S(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::F(x) => num(*x),
            Cell::U(n) => n.to_string(),
            Cell::I(n) => n.to_string(),
            Cell::S(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
            Cell::S(t) => t.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => (*x).into(),
            Cell::U(n) => (*n).into(),
            Cell::I(n) => (*n).into(),
            Cell::S(t) => t.clone().into(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::U(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(t: &str) -> Self {
        Cell::S(t.to_owned())
    }
}

impl From<i64> for Cell {
    fn from(n: i64) -> Self {
        Cell::I(n)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Written as trailing `# key=value` lines in CSV, `summary` object in JSON.
    pub summary: Meta,
}

impl Table {
    pub fn new<S: Into<String>>(meta: Meta, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            meta,
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            summary: Meta::default(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        self.meta.write_csv(out)?;
        writeln!(out, "{}", self.columns.join(","))?;
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(Cell::text).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        self.summary.write_csv(out)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("meta".into(), self.meta.to_json());
        obj.insert("columns".into(), self.columns.clone().into());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        obj.insert("rows".into(), rows.into());
        if !self.summary.0.is_empty() {
            obj.insert("summary".into(), self.summary.to_json());
        }
        Value::Object(obj)
    }
}

pub fn write_json(value: &Value, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Runs `f` against the requested sink, mapping write failures to I/O errors.
pub fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let io_err = |source| CliError::Io {
        path: path.map_or_else(|| "<stdout>".into(), Path::to_owned),
        source,
    };
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(io_err)?);
            f(&mut w).and_then(|_| w.flush()).map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            match f(&mut w).and_then(|_| w.flush()) {
                // closed pipe (e.g. `| head`) is not an error worth reporting
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(io_err),
            }
        }
    }
}
