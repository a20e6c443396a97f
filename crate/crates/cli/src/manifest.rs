use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

/// Record written beside every output: enough to rerun the command.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub config_paths: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub tool_version: &'static str,
    pub timestamp: String,
    pub wall_time_secs: f64,
}

pub struct ManifestBuilder {
    started: Instant,
    manifest: RunManifest,
}

impl ManifestBuilder {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            started: Instant::now(),
            manifest: RunManifest {
                command: command.to_string(),
                args: std::env::args().collect(),
                config_paths: Vec::new(),
                seed,
                inputs: Vec::new(),
                outputs: Vec::new(),
                tool_version: env!("CARGO_PKG_VERSION"),
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                wall_time_secs: 0.0,
            },
        }
    }

    pub fn config(&mut self, path: &Path) -> &mut Self {
        self.manifest.config_paths.push(path.to_path_buf());
        self
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.manifest.inputs.push(path.to_path_buf());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.manifest.outputs.push(path.to_path_buf());
        self
    }

    pub fn write(mut self, path: &Path) -> stigtrend::Result<()> {
        self.manifest.wall_time_secs = self.started.elapsed().as_secs_f64();
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// `out/params.json` -> `out/params.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}
