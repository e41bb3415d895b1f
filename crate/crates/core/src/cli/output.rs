//! Deterministic CSV / JSON emission.
//!
//! Numbers are written with Rust's shortest round-trip float formatting, so
//! every value parses back to the exact bits that produced it. CSV files
//! start with a `# config: {...}` comment carrying the resolved run
//! configuration, then a header row.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use super::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};

/// One output table: column names plus rows of pre-formatted cells.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn format_f64(x: f64) -> String {
    format!("{x}")
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("cannot write {}: {e}", path.display()))
}

/// Writes the table in the requested format with the resolved config embedded.
pub fn write_table(
    path: &Path,
    format: OutputFormat,
    config: &RunConfig,
    table: &Table,
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(path, &config.canonical_json(), table),
        OutputFormat::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (name, cell) in table.columns.iter().zip(row) {
                        // numbers stay numbers in JSON where they parse
                        let value = cell
                            .parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .map(|v| json!(v))
                            .unwrap_or_else(|| json!(cell));
                        obj.insert((*name).to_string(), value);
                    }
                    Value::Object(obj)
                })
                .collect();
            let doc = json!({
                "config": serde_json::to_value(config).expect("config is serializable"),
                "columns": table.columns,
                "rows": rows,
            });
            write_bytes(
                path,
                (serde_json::to_string_pretty(&doc).unwrap() + "\n").as_bytes(),
            )
        }
    }
}

pub fn write_csv(path: &Path, config_json: &str, table: &Table) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "# config: {config_json}").map_err(|e| io_err(path, e))?;
    writeln!(out, "{}", table.columns.join(",")).map_err(|e| io_err(path, e))?;
    for row in &table.rows {
        writeln!(out, "{}", row.join(",")).map_err(|e| io_err(path, e))?;
    }
    write_bytes(path, &out)
}

pub fn write_json_value(path: &Path, value: &Value) -> Result<()> {
    write_bytes(
        path,
        (serde_json::to_string_pretty(value).unwrap() + "\n").as_bytes(),
    )
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| io_err(path, e))?;
        }
    }
    std::fs::write(path, bytes).map_err(|e| io_err(path, e))
}

/// Sidecar path: `out.csv` -> `out.meta.json`.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string());
    path.with_file_name(format!("{stem}.meta.json"))
}
