use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    /// SHA-256 of the resolved configuration, hex encoded.
    pub config_digest: String,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<PathBuf>,
    pub duration_s: f64,
    /// Fitted or derived figures of merit for the run.
    pub summary: serde_json::Value,
}

/// Hash of the JSON encoding. Field order is fixed by the struct
/// definitions, so equal configs hash equally.
pub fn config_digest<T: Serialize>(config: &T) -> Result<String, CliError> {
    let bytes = serde_json::to_vec(config).map_err(|e| CliError::io("config encoding", e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// `results.csv` → `results.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}
