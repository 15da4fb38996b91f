//! Provenance headers and atomic file output.

use crate::error::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::Path;

/// Identifies the producing configuration; written at the top of every artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub version: String,
    pub command: String,
    /// SHA-256 of the canonical JSON of the effective configuration.
    pub config_hash: String,
}

impl Provenance {
    pub fn new<C: Serialize>(command: &str, config: &C) -> Result<Self> {
        Ok(Self { version: crate::VERSION.to_string(), command: command.to_string(), config_hash: config_hash(config)? })
    }

    /// Comment lines for CSV headers (without the leading `#`).
    pub fn header_lines(&self) -> Vec<String> {
        vec![
            format!("cornerwave {}", self.version),
            format!("command: {}", self.command),
            format!("config sha256: {}", self.config_hash),
        ]
    }
}

/// Hex SHA-256 of `config` serialized to JSON with sorted object keys.
pub fn config_hash<C: Serialize>(config: &C) -> Result<String> {
    // serde_json::Value keeps objects in a BTreeMap, so this is key-order independent.
    let value = serde_json::to_value(config)?;
    let text = serde_json::to_string(&value)?;
    let digest = Sha256::digest(text.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// JSON document `{"provenance": ..., "data": ...}`, pretty-printed.
pub fn json_with_provenance<T: Serialize>(prov: &Provenance, data: &T) -> Result<String> {
    let doc = serde_json::json!({ "provenance": prov, "data": data });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}
