//! JSON-lines result records.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{DataError, Result};
use crate::eval::EvalResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub dataset: String,
    /// `none` for a plain evaluation, else the sweep protocol.
    pub protocol: String,
    pub value: Option<f64>,
    pub method: String,
    pub mean: f64,
    pub std: f64,
    pub folds: usize,
    pub seed: u64,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
}

impl ResultRecord {
    pub fn new(dataset: &str, protocol: &str, value: Option<f64>, method: &str, result: &EvalResult, seed: u64) -> Self {
        Self {
            dataset: dataset.to_string(),
            protocol: protocol.to_string(),
            value,
            method: method.to_string(),
            mean: result.mean,
            std: result.std,
            folds: result.per_fold_accuracy.len(),
            seed,
            timestamp: timestamp(),
        }
    }
}

pub fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.trim().parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Appends one JSON object per line.
pub fn append_records(path: impl AsRef<Path>, records: &[ResultRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::new();
    for r in records {
        text.push_str(&serde_json::to_string(r).map_err(|e| DataError::Invalid(e.to_string()))?);
        text.push('\n');
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| DataError::io(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| DataError::io(path, e))
}
