use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    /// Relative to the manifest's directory.
    pub path: String,
    pub sha256: String,
}

/// Record of one command invocation: enough to rerun it and check that the
/// outputs come out byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn digests(base: &Path, files: &[PathBuf]) -> Result<Vec<FileDigest>> {
    files
        .iter()
        .map(|f| {
            let rel = f.strip_prefix(base).unwrap_or(f);
            Ok(FileDigest {
                path: rel.to_string_lossy().into_owned(),
                sha256: sha256_file(f)?,
            })
        })
        .collect()
}

impl Manifest {
    pub fn new<C: Serialize>(command: &str, config: &C) -> Result<Self> {
        Ok(Self {
            tool: "fracroot".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: serde_json::to_value(config)?,
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path, command: &str) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        let m: Manifest =
            serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
        if m.command != command {
            bail!(
                "manifest {} records command {:?}, not {command:?}",
                path.display(),
                m.command
            );
        }
        Ok(m)
    }

    pub fn config<C: for<'de> Deserialize<'de>>(&self) -> Result<C> {
        serde_json::from_value(self.config.clone()).context("manifest config does not match this command")
    }

    /// Compares the recorded output digests with files under `dir`.
    pub fn verify_outputs(&self, dir: &Path) -> Result<usize> {
        let mut bad = Vec::new();
        for d in &self.outputs {
            let now = sha256_file(&dir.join(&d.path)).unwrap_or_default();
            if now != d.sha256 {
                bad.push(d.path.clone());
            }
        }
        if !bad.is_empty() {
            bail!("replay differs from the manifest in: {}", bad.join(", "));
        }
        Ok(self.outputs.len())
    }
}
