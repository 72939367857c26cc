//! Report persistence: CSV and JSON outputs stamped with the hash of the
//! configuration that produced them, plus a run manifest. Wall-clock time is
//! recorded only in the manifest so data files are reproducible byte for byte.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const HASH_PREFIX: &str = "# config_hash=";

/// SHA-256 of the canonical JSON form (object keys sorted) of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let value = serde_json::to_value(config)?;
    Ok(sha256_hex(serde_json::to_string(&value)?.as_bytes()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// CSV content without comment lines.
pub fn csv_body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

/// Reads the configuration hash embedded in a CSV or JSON report.
pub fn read_config_hash(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)?;
    if let Some(line) = text.lines().find(|l| l.starts_with(HASH_PREFIX)) {
        return Ok(line[HASH_PREFIX.len()..].trim().to_string());
    }
    let value: Value =
        serde_json::from_str(&text).map_err(|_| Error::Parse(format!("{} carries no config hash", path.display())))?;
    value
        .get("config_hash")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Parse(format!("{} carries no config hash", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_hash: String,
    pub config: Value,
    pub created_unix_seconds: u64,
    pub status: String,
    pub outputs: Vec<OutputEntry>,
}

/// Writes the files of one run into a directory and records them.
#[derive(Debug)]
pub struct ReportWriter {
    dir: PathBuf,
    hash: String,
    outputs: Vec<OutputEntry>,
}

impl ReportWriter {
    pub fn new(dir: impl Into<PathBuf>, hash: String) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, hash, outputs: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// Writes `body` (starting with its header row) after a hash comment line.
    pub fn write_csv(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        self.write_raw(name, format!("{HASH_PREFIX}{}\n{body}", self.hash))
    }

    /// Writes `value` as pretty JSON with a `config_hash` field added.
    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut v = serde_json::to_value(value)?;
        match &mut v {
            Value::Object(map) => {
                map.insert("config_hash".into(), Value::String(self.hash.clone()));
            }
            other => {
                let inner = std::mem::take(other);
                *other = serde_json::json!({ "config_hash": self.hash, "data": inner });
            }
        }
        self.write_raw(name, serde_json::to_string_pretty(&v)? + "\n")
    }

    pub fn write_raw(&mut self, name: &str, text: String) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, &text)?;
        self.outputs.push(OutputEntry { file: name.to_string(), sha256: sha256_hex(text.as_bytes()) });
        Ok(path)
    }

    /// Writes `<command>.manifest.json` and returns its path.
    pub fn finish<T: Serialize>(self, command: &str, config: &T, status: &str) -> Result<PathBuf> {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config_hash: self.hash.clone(),
            config: serde_json::to_value(config)?,
            created_unix_seconds: created,
            status: status.to_string(),
            outputs: self.outputs,
        };
        let path = self.dir.join(format!("{command}.manifest.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn hash_ignores_key_order() {
        let a: BTreeMap<&str, i32> = [("a", 1), ("b", 2)].into();
        let b = serde_json::json!({"b": 2, "a": 1});
        assert_eq!(config_hash(&a).unwrap(), config_hash(&b).unwrap());
        assert_ne!(config_hash(&a).unwrap(), config_hash(&serde_json::json!({"a": 2})).unwrap());
    }

    #[test]
    fn hashes_are_embedded_and_recovered() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ReportWriter::new(dir.path(), "abc123".into()).unwrap();
        let csv = w.write_csv("x.csv", "a,b\n1,2\n").unwrap();
        let json = w.write_json("x.json", &serde_json::json!({"k": 1})).unwrap();
        let list = w.write_json("y.json", &vec![1, 2]).unwrap();
        assert_eq!(read_config_hash(&csv).unwrap(), "abc123");
        assert_eq!(read_config_hash(&json).unwrap(), "abc123");
        assert_eq!(read_config_hash(&list).unwrap(), "abc123");
        assert_eq!(csv_body(&std::fs::read_to_string(&csv).unwrap()), "a,b\n1,2\n");
        let m = w.finish("test", &serde_json::json!({}), "ok").unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(m).unwrap()).unwrap();
        assert_eq!(v["outputs"].as_array().unwrap().len(), 3);
        assert!(v["created_unix_seconds"].as_u64().unwrap() > 0);
    }
}
