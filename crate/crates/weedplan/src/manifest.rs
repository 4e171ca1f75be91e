//! `manifest.json` written next to sweep outputs.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::SweepConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// Seconds since the Unix epoch. The only field that differs between reruns.
    pub timestamp_unix_s: u64,
    pub config_path: String,
    /// Every key with its effective value, in config-file syntax.
    pub resolved_config: String,
    pub output_dir: String,
    pub jobs: Option<usize>,
    pub timing: bool,
}

impl RunManifest {
    pub fn new(
        config_path: &Path,
        config: &SweepConfig,
        output_dir: &Path,
        jobs: Option<usize>,
        timing: bool,
    ) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config_path: config_path.display().to_string(),
            resolved_config: config.render(),
            output_dir: output_dir.display().to_string(),
            jobs,
            timing,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
