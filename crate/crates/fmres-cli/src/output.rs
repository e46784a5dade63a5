//! Output-file conventions: the version/config-hash header every file
//! starts with, and the two float formats (fixed six decimals for tables
//! meant to be read, shortest round-trip for data meant to be re-loaded).

use std::path::{Path, PathBuf};

use fmres_core::{Error, Result};

/// The comment line at the top of every artifact.
pub fn header_line(config_hash: &str) -> String {
    format!("# fmres {} config {config_hash}\n", env!("CARGO_PKG_VERSION"))
}

/// Write an artifact: header comment line, then the body.
pub fn write_artifact(path: &Path, config_hash: &str, body: &str) -> Result<()> {
    let mut text = header_line(config_hash);
    text.push_str(body);
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Fixed-point cell for presentation tables.
pub fn fixed6(v: f64) -> String {
    format!("{v:.6}")
}

/// Strip the leading comment lines of an artifact and split off the CSV
/// header row; returns (header cells, data lines).
pub fn read_csv_artifact(path: &Path) -> Result<(Vec<String>, Vec<String>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid(format!("{}: no header row", path.display())))?
        .split(',')
        .map(|c| c.trim().to_string())
        .collect();
    let data = lines.map(str::to_string).collect();
    Ok((header, data))
}

/// Where a named artifact lands inside the output directory.
pub fn artifact_path(out_dir: &Path, name: &str) -> PathBuf {
    out_dir.join(name)
}
