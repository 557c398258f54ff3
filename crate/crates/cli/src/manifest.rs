//! Run manifests: config echo, seed, and content hashes of every artifact.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub file: String,
    pub bytes: u64,
    /// FNV-1a 64-bit content fingerprint (hex). Not cryptographic; meant to
    /// detect accidental divergence between reruns.
    pub fnv1a64: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub outputs: Vec<ArtifactEntry>,
}

impl RunManifest {
    /// Hash the given artifacts (paths relative to `dir`) and write
    /// `manifest.json` beside them.
    pub fn write(
        dir: &Path,
        experiment: &str,
        seed: u64,
        config: &ExperimentConfig,
        files: &[PathBuf],
    ) -> Result<PathBuf, CliError> {
        let mut names: Vec<&PathBuf> = files.iter().collect();
        names.sort();
        let mut outputs = Vec::with_capacity(names.len());
        for file in names {
            let bytes = std::fs::read(file)?;
            outputs.push(ArtifactEntry {
                file: file
                    .strip_prefix(dir)
                    .unwrap_or(file)
                    .to_string_lossy()
                    .into_owned(),
                bytes: bytes.len() as u64,
                fnv1a64: format!("{:016x}", fnv1a64(&bytes)),
            });
        }
        let manifest = RunManifest {
            experiment: experiment.to_string(),
            seed,
            config: config.clone(),
            outputs,
        };
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
