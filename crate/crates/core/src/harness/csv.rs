use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::Result;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance recorded on the first line of every CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvMeta {
    pub config_hash: String,
    pub seed: u64,
}

impl CsvMeta {
    /// Hash the JSON form of whatever parameters produced the output.
    pub fn for_config<C: serde::Serialize>(config: &C, seed: u64) -> Self {
        let json = serde_json::to_vec(config).expect("config serializes");
        let digest = Sha256::digest(&json);
        let hash = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        Self {
            config_hash: hash,
            seed,
        }
    }
}

/// 17 significant digits, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "null".into())
}

/// One CSV field.
pub enum Cell {
    Str(String),
    Int(u64),
    Float(Option<f64>),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(Some(x))
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Str(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Str(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => fmt_opt(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// In-memory CSV table: provenance comment, header, rows.
#[derive(Debug, Clone)]
pub struct CsvTable {
    text: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(meta: &CsvMeta, header: &[&str]) -> Self {
        let mut text = String::new();
        writeln!(
            text,
            "# potlab {CODE_VERSION} config={} seed={}",
            meta.config_hash, meta.seed
        )
        .unwrap();
        text.push_str(&header.join(","));
        text.push('\n');
        Self {
            text,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns, "row width");
        let parts: Vec<String> = cells.iter().map(Cell::render).collect();
        self.text.push_str(&parts.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, &self.text)?;
        Ok(())
    }
}

/// Semicolon-joined values for list-valued fields.
pub fn join_floats(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(";")
}
