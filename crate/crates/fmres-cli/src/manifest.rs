//! The pipeline manifest: one row per artifact with its producing stage
//! and content hash, so a finished output directory is self-describing
//! and two runs can be compared byte for byte.

use std::path::Path;

use fmres_core::{Error, Result};

use crate::config::file_digest;
use crate::output::header_line;

pub const MANIFEST_NAME: &str = "manifest.csv";

/// Collects `stage,artifact,sha256` rows while the pipeline runs.
#[derive(Debug, Default)]
pub struct Manifest {
    rows: Vec<(String, String, String)>,
    failed_stage: Option<String>,
}

impl Manifest {
    pub fn new() -> Manifest {
        Manifest::default()
    }

    /// Record an artifact that was just written; hashes the file content.
    pub fn record(&mut self, stage: &str, out_dir: &Path, artifact: &str) -> Result<()> {
        let digest = file_digest(&out_dir.join(artifact))?;
        self.rows.push((stage.to_string(), artifact.to_string(), digest));
        Ok(())
    }

    /// Mark the stage whose failure halted the run.
    pub fn mark_failed(&mut self, stage: &str) {
        self.failed_stage = Some(stage.to_string());
    }

    pub fn artifact_count(&self) -> usize {
        self.rows.len()
    }

    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut text = header_line(config_hash);
        text.push_str("stage,artifact,sha256\n");
        for (stage, artifact, digest) in &self.rows {
            text.push_str(&format!("{stage},{artifact},{digest}\n"));
        }
        if let Some(stage) = &self.failed_stage {
            text.push_str(&format!("FAILED,{stage}\n"));
        }
        text
    }

    /// Write `manifest.csv` into the output directory.
    pub fn write(&self, out_dir: &Path, config_hash: &str) -> Result<()> {
        let path = out_dir.join(MANIFEST_NAME);
        std::fs::write(&path, self.to_csv(config_hash)).map_err(|e| Error::io(&path, e))
    }
}
