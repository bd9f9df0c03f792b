use crate::{runtime, CliError};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Modelling assumptions that are not part of any configuration value.
pub const ASSUMPTIONS: &[&str] = &[
    "eavesdropper does not know the artificial-noise realization",
    "eavesdropper knows her effective gain and total noise variance (artificial noise plus thermal)",
    "eavesdropper decodes with successive cancellation, treating secret and random positions as information bits",
    "channel entries are Rayleigh magnitudes with independent uniform signs",
    "a fresh artificial-noise vector is drawn for every channel use",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: String,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub config: serde_json::Value,
    pub assumptions: Vec<String>,
    pub duration_secs: Option<f64>,
    pub outputs: Vec<String>,
}

/// Writes the manifest before any result file, then completes it.
pub struct RunRecorder {
    dir: PathBuf,
    manifest: Manifest,
    start: Instant,
}

impl RunRecorder {
    pub fn start<C: Serialize>(
        dir: &Path,
        command: &str,
        config: &C,
        seed: Option<u64>,
        workers: Option<usize>,
    ) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            status: "running".to_string(),
            seed,
            workers,
            config: serde_json::to_value(config).map_err(runtime)?,
            assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
            duration_secs: None,
            outputs: Vec::new(),
        };
        let rec = Self {
            dir: dir.to_path_buf(),
            manifest,
            start: Instant::now(),
        };
        rec.write()?;
        Ok(rec)
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }

    pub fn add_output(&mut self, file: &str) {
        self.manifest.outputs.push(file.to_string());
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.manifest.status = "complete".to_string();
        self.manifest.duration_secs = Some(self.start.elapsed().as_secs_f64());
        self.write()
    }

    fn write(&self) -> Result<(), CliError> {
        let path = self.dir.join(MANIFEST_FILE);
        let tmp = self.dir.join(format!("{MANIFEST_FILE}.tmp"));
        let text = serde_json::to_string_pretty(&self.manifest).map_err(runtime)?;
        std::fs::write(&tmp, text + "\n").map_err(|e| runtime(format!("{}: {e}", tmp.display())))?;
        std::fs::rename(&tmp, &path).map_err(|e| runtime(format!("{}: {e}", path.display())))
    }
}
