//! CSV tables and the JSON run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::CliError;

/// A CSV table whose header names carry their units, e.g. `t [T]`.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, path: &Path) -> Result<(), CliError> {
        let io = |e: csv::Error| CliError::Io {
            path: path.to_path_buf(),
            source: e.into(),
        };
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            // Shortest round-trip formatting keeps bodies byte-stable.
            w.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    scenario: &'static str,
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    seed: u64,
    config_sha256: String,
    config: &'a ScenarioConfig,
    outputs: Vec<String>,
    results: Map<String, Value>,
}

pub fn config_hash(config: &ScenarioConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(&canonical))
}

/// Writes `<scenario>.csv` and `<scenario>.manifest.json` into `dir`.
pub fn write_outputs(
    dir: &Path,
    kind: ScenarioKind,
    config: &ScenarioConfig,
    table: &Table,
    results: Map<String, Value>,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let csv_name = format!("{}.csv", kind.name());
    let csv_path = dir.join(&csv_name);
    table.write(&csv_path)?;
    let manifest = Manifest {
        scenario: kind.name(),
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        core_version: tube_diffusion::VERSION,
        seed: config.seed,
        config_sha256: config_hash(config),
        config,
        outputs: vec![csv_name],
        results,
    };
    let manifest_path = dir.join(format!("{}.manifest.json", kind.name()));
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, text + "\n").map_err(|e| CliError::Io {
        path: manifest_path.clone(),
        source: e,
    })?;
    Ok(vec![csv_path, manifest_path])
}
