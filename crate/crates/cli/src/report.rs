//! Report envelope written to standard output.

use serde::Serialize;

/// Verdict payload wrapped with echoed inputs and the tool version.
/// Field order is fixed, so serialization is deterministic.
#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub verdict: T,
    pub provenance: serde_json::Value,
    pub version: &'static str,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl<T: Serialize> Report<T> {
    pub fn new(verdict: T, provenance: serde_json::Value) -> Self {
        Report {
            verdict,
            provenance,
            version: VERSION,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report payloads serialize")
    }
}
