use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Text(String),
    Flag(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(n) => (*n).into(),
            Cell::Num(x) => {
                serde_json::Number::from_f64(*x).map_or(serde_json::Value::Null, Into::into)
            }
            Cell::Text(s) => s.clone().into(),
            Cell::Flag(b) => (*b).into(),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// A named table written as CSV or as a JSON array of row objects.
pub struct Table {
    pub stem: &'static str,
    pub headers: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(stem: &'static str, headers: &'static [&'static str]) -> Self {
        Table {
            stem,
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Artifact, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(self.headers)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                Ok(Artifact::new(format!("{}.csv", self.stem), bytes))
            }
            Format::Json => {
                let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
                    .rows
                    .iter()
                    .map(|row| {
                        self.headers
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect()
                    })
                    .collect();
                Artifact::json(format!("{}.json", self.stem), &rows)
            }
        }
    }
}

pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn new(name: String, bytes: Vec<u8>) -> Self {
        Artifact { name, bytes }
    }

    pub fn json<T: Serialize + ?Sized>(name: String, value: &T) -> Result<Self, CliError> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        Ok(Artifact { name, bytes })
    }
}

#[derive(Serialize)]
struct OutputEntry<'a> {
    file: &'a str,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    library_version: &'static str,
    config: &'a RunConfig,
    outputs: Vec<OutputEntry<'a>>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Writes every artifact into `dir`, then the manifest listing their checksums.
pub fn write_run(dir: &Path, config: &RunConfig, artifacts: &[Artifact]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let mut outputs = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        std::fs::write(dir.join(&a.name), &a.bytes)?;
        outputs.push(OutputEntry {
            file: &a.name,
            sha256: hex::encode(Sha256::digest(&a.bytes)),
            bytes: a.bytes.len(),
        });
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        library_version: gup_oscillator::VERSION,
        config,
        outputs,
    };
    let m = Artifact::json(MANIFEST_NAME.into(), &manifest)?;
    std::fs::write(dir.join(MANIFEST_NAME), m.bytes)?;
    Ok(())
}
