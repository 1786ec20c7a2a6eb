//! The self-describing result envelope every command emits.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Envelope around a command's payload: echo of the request, provenance and
/// warnings.  The payload schema is fixed per command; determinism guarantees
/// cover the payload (timestamps naturally differ between runs).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultEnvelope {
    pub schema_version: String,
    pub command: String,
    pub parameters: Value,
    pub timestamp_unix: u64,
    pub library_version: String,
    pub warnings: Vec<String>,
    pub payload: Value,
}

impl ResultEnvelope {
    pub fn new(command: &str, parameters: Value, payload: Value, warnings: Vec<String>) -> Self {
        ResultEnvelope {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            parameters,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            warnings,
            payload,
        }
    }

    /// Payload bytes used for determinism comparisons (timestamp excluded by
    /// construction).
    pub fn payload_json(&self) -> String {
        crate::output::to_json_string(&self.payload).expect("payload serializes")
    }

    pub fn to_json(&self) -> String {
        crate::output::to_json_string(self).expect("envelope serializes")
    }
}
