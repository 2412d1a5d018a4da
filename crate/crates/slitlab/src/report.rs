//! Config hashing and run metadata.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;
use crate::error::{AppError, AppResult};

/// SHA-256 of the canonical JSON form of a resolved config.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let bytes = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata<'a> {
    pub run_id: String,
    pub scenario: &'static str,
    pub config_hash: String,
    pub version: &'static str,
    pub core_version: &'static str,
    /// The only non-deterministic field of a run.
    pub wall_time_s: f64,
    pub config: &'a ScenarioConfig,
    pub results: serde_json::Value,
}

pub fn write_json(path: &Path, value: &impl Serialize) -> AppResult<()> {
    let text = serde_json::to_string_pretty(value).expect("value serializes");
    std::fs::write(path, text + "\n").map_err(|e| AppError::io(path, e))
}
