use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use wepbench_core::domain::ExchangeStatus;

use crate::{GatewayError, Result};

/// One backend exchange as it happened, written before the reply is parsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub prompt_id: String,
    pub backend: String,
    pub model: String,
    pub request: String,
    pub raw: String,
    pub status: ExchangeStatus,
    pub attempts: u32,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub http_status: Option<u16>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug)]
pub struct Transcript {
    path: PathBuf,
    file: Mutex<File>,
}

impl Transcript {
    /// Appends to an existing transcript so reruns keep earlier exchanges.
    pub fn open(path: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| GatewayError::io(path, e))?;
        Ok(Transcript {
            path: path.to_path_buf(),
            file: Mutex::new(file),
        })
    }

    pub fn record(&self, entry: &TranscriptEntry) -> Result<()> {
        let line = serde_json::to_string(entry).expect("entry serializes");
        let mut file = self.file.lock().expect("transcript lock");
        writeln!(file, "{line}").map_err(|e| GatewayError::io(&self.path, e))?;
        file.flush().map_err(|e| GatewayError::io(&self.path, e))
    }
}
