//! Output directory with a content-hash manifest.
//!
//! Every run writes `manifest.json`: the command name plus one entry per
//! artifact (relative path, SHA-256, byte size), sorted by path. Reruns with
//! identical inputs produce byte-identical manifests.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{CliError, CliResult};

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    artifacts: Vec<ManifestEntry>,
}

pub struct OutputDir {
    root: PathBuf,
    command: String,
    entries: Vec<ManifestEntry>,
}

impl OutputDir {
    pub fn create(root: &Path, command: &str) -> CliResult<Self> {
        std::fs::create_dir_all(root).map_err(|e| {
            CliError::Data(anyhow::anyhow!("cannot create {}: {e}", root.display()))
        })?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            command: command.to_string(),
            entries: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes an artifact and records its hash.
    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.root.join(rel);
        std::fs::write(&path, bytes).map_err(|e| {
            CliError::Data(anyhow::anyhow!("cannot write {}: {e}", path.display()))
        })?;
        let digest = Sha256::digest(bytes);
        let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.entries.push(ManifestEntry {
            path: rel.to_string(),
            sha256,
            bytes: bytes.len(),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Data(anyhow::anyhow!("cannot serialize {rel}: {e}")))?;
        text.push('\n');
        self.write(rel, text.as_bytes())
    }

    /// Writes `manifest.json` and consumes the directory handle.
    pub fn finish(mut self) -> CliResult<()> {
        self.entries.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            command: &self.command,
            artifacts: self.entries,
        };
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Data(anyhow::anyhow!("cannot serialize manifest: {e}")))?;
        text.push('\n');
        let path = self.root.join("manifest.json");
        std::fs::write(&path, text).map_err(|e| {
            CliError::Data(anyhow::anyhow!("cannot write {}: {e}", path.display()))
        })
    }
}
