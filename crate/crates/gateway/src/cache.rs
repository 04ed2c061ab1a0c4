use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wepbench_core::domain::ExchangeStatus;

use crate::{GatewayError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub prompt_id: String,
    pub backend: String,
    pub model: String,
    pub raw: String,
    pub status: ExchangeStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// sha256 over backend name, model, temperature and prompt body.
pub fn cache_key(backend: &str, model: &str, temperature: f64, body: &str) -> String {
    let material = serde_json::to_string(&(backend, model, temperature, body)).expect("tuple serializes");
    hex::encode(Sha256::digest(material.as_bytes()))
}

/// Append-only JSONL cache. Readers share one lock with the writer; appends
/// are serialized.
#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    inner: Mutex<(HashMap<String, CacheEntry>, File)>,
}

impl Cache {
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let file = File::open(path).map_err(|e| GatewayError::io(path, e))?;
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| GatewayError::io(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: CacheEntry = serde_json::from_str(&line).map_err(|e| GatewayError::Data {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: e.to_string(),
                })?;
                entries.insert(entry.key.clone(), entry);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| GatewayError::io(path, e))?;
        Ok(Cache {
            path: path.to_path_buf(),
            inner: Mutex::new((entries, file)),
        })
    }

    pub fn get(&self, key: &str) -> Option<CacheEntry> {
        self.inner.lock().expect("cache lock").0.get(key).cloned()
    }

    pub fn insert(&self, entry: CacheEntry) -> Result<()> {
        let mut guard = self.inner.lock().expect("cache lock");
        let line = serde_json::to_string(&entry).expect("entry serializes");
        writeln!(guard.1, "{line}").map_err(|e| GatewayError::io(&self.path, e))?;
        guard.0.insert(entry.key.clone(), entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache lock").0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_every_part() {
        let base = cache_key("b", "m", 0.0, "body");
        assert_eq!(base, cache_key("b", "m", 0.0, "body"));
        assert_ne!(base, cache_key("c", "m", 0.0, "body"));
        assert_ne!(base, cache_key("b", "n", 0.0, "body"));
        assert_ne!(base, cache_key("b", "m", 0.5, "body"));
        assert_ne!(base, cache_key("b", "m", 0.0, "body "));
        assert_eq!(base.len(), 64);
    }

    #[test]
    fn persists_across_opens() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let entry = CacheEntry {
            key: "k".into(),
            prompt_id: "p".into(),
            backend: "b".into(),
            model: "m".into(),
            raw: "0.5".into(),
            status: ExchangeStatus::Ok,
            timestamp: None,
        };
        Cache::open(&path).unwrap().insert(entry.clone()).unwrap();
        let reopened = Cache::open(&path).unwrap();
        assert_eq!(reopened.get("k"), Some(entry));
        assert_eq!(reopened.len(), 1);
    }
}
