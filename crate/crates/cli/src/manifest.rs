//! Hashed record of a command's inputs, outputs and effective settings.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    pub fn of_bytes(path: impl Into<String>, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len() as u64,
        }
    }

    pub fn of_file(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Validation(format!("cannot read `{}`: {e}", path.display())))?;
        Ok(FileDigest::of_bytes(path.display().to_string(), &bytes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    /// Paths relative to the manifest's directory.
    pub outputs: Vec<FileDigest>,
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("bad manifest `{}`: {e}", path.display())))
    }

    pub fn output(&self, path: &str) -> Option<&FileDigest> {
        self.outputs.iter().find(|o| o.path == path)
    }
}

/// Writes files under one directory and remembers their digests.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileDigest>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, relative: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
        let path = self.root.join(relative);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, contents.as_ref())?;
        self.files.retain(|f| f.path != relative);
        self.files.push(FileDigest::of_bytes(relative, contents.as_ref()));
        Ok(path)
    }

    /// Writes the manifest as `manifest_name` inside the directory.
    pub fn finish(
        mut self,
        manifest_name: &str,
        command: &str,
        config: &impl Serialize,
        mut inputs: Vec<FileDigest>,
        warnings: Vec<String>,
    ) -> Result<Manifest> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        inputs.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            inputs,
            outputs: self.files,
            warnings,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        std::fs::write(self.root.join(manifest_name), text)?;
        Ok(manifest)
    }
}
