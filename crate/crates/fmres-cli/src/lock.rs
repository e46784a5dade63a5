//! One process per output directory, guarded by a lock file.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use fmres_core::{Error, Result};

pub const LOCK_NAME: &str = ".fmres.lock";

/// Exclusive claim on an output directory for the life of the value.
/// The lock file is removed on drop, including on error unwinds.
#[derive(Debug)]
pub struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    /// Create the output directory if needed and claim it. Fails when
    /// another run already holds the directory.
    pub fn acquire(out_dir: &Path) -> Result<OutputLock> {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        let path = out_dir.join(LOCK_NAME);
        let mut file = match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                return Err(Error::invalid(format!(
                    "output directory '{}' is locked by another run; \
                     remove {LOCK_NAME} if no other fmres process is active",
                    out_dir.display()
                )));
            }
            Err(e) => return Err(Error::io(&path, e)),
        };
        let _ = writeln!(file, "fmres {} pid {}", env!("CARGO_PKG_VERSION"), std::process::id());
        Ok(OutputLock { path })
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}
