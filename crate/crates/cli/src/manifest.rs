use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StageTiming {
    pub stage: String,
    pub millis: f64,
}

/// Record of one run. Everything except `timings` is a function of the
/// inputs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub rng: String,
    pub config: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
    pub timings: Vec<StageTiming>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            rng: siteplan::scenario::RNG_ALGORITHM.to_string(),
            config: BTreeMap::new(),
            warnings: Vec::new(),
            outputs: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.to_string(), value.to_string());
    }

    /// Runs `f` and records its wall time under `stage`.
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(StageTiming { stage: stage.to_string(), millis: start.elapsed().as_secs_f64() * 1e3 });
        out
    }

    pub fn add_output(&mut self, name: &str) {
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
    }

    /// Writes `<out>/<file_name>`; the manifest lists itself last.
    pub fn write(&mut self, out: &Path, file_name: &str) -> Result<(), CliError> {
        self.add_output(file_name);
        let path = out.join(file_name);
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::output(&path, e))?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::output(&path, e))
    }
}
