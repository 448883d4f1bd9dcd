use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use zonolab::digest;
use zonolab::rng::RNG_VERSION;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Provenance record written next to every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command_line: Vec<String>,
    /// SHA-256 of the canonical JSON of the resolved configuration.
    pub config_digest: String,
    pub seed: Option<u64>,
    /// `true` when no seed was given and one was drawn from OS entropy.
    pub seed_from_entropy: bool,
    pub rng_version: &'static str,
    pub workers: usize,
    pub parallel_build: bool,
    pub started_at: String,
    pub finished_at: String,
}

impl RunManifest {
    pub fn start(workers: usize) -> Self {
        Self {
            schema_version: MANIFEST_SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            command_line: std::env::args().collect(),
            config_digest: String::new(),
            seed: None,
            seed_from_entropy: false,
            rng_version: RNG_VERSION,
            workers,
            parallel_build: zonolab::par::parallel_enabled(),
            started_at: now(),
            finished_at: String::new(),
        }
    }

    pub fn config<T: Serialize>(&mut self, config: &T) {
        let canonical = serde_json::to_value(config).expect("configs serialize");
        self.config_digest = digest::bytes(canonical.to_string().as_bytes());
    }

    pub fn finish(mut self) -> Self {
        self.finished_at = now();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}
