use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Value,
    pub input_digest: String,
    pub verdicts: Map<String, Value>,
    pub certificates: Map<String, Value>,
    pub artifacts: Vec<String>,
}

/// Collects inputs, verdicts and artifacts while a command runs.
pub struct ReportBuilder {
    command: Value,
    hasher: Sha256,
    inputs: usize,
    out_dir: Option<PathBuf>,
    verdicts: Map<String, Value>,
    certificates: Map<String, Value>,
    artifacts: Vec<String>,
}

impl ReportBuilder {
    pub fn new(command: Value, out_dir: Option<PathBuf>) -> Self {
        ReportBuilder {
            command,
            hasher: Sha256::new(),
            inputs: 0,
            out_dir,
            verdicts: Map::new(),
            certificates: Map::new(),
            artifacts: Vec::new(),
        }
    }

    /// Reads an input file and folds its bytes into the digest.
    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let text =
            fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        self.inputs += 1;
        Ok(text)
    }

    pub fn verdict(&mut self, key: &str, v: impl Serialize) {
        self.verdicts.insert(key.into(), to_value(v));
    }

    pub fn certificate(&mut self, key: &str, v: impl Serialize) {
        self.certificates.insert(key.into(), to_value(v));
    }

    /// Writes `name` under the output directory, if there is one.
    pub fn artifact(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let Some(dir) = &self.out_dir else { return Ok(()) };
        let io = |source| CliError::Io { path: dir.display().to_string(), source };
        fs::create_dir_all(dir).map_err(io)?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        self.artifacts.push(path.display().to_string());
        Ok(())
    }

    pub fn finish(mut self) -> Report {
        // Commands without input files are identified by their arguments.
        if self.inputs == 0 {
            self.hasher.update(self.command.to_string().as_bytes());
        }
        let digest = self.hasher.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        Report {
            command: self.command,
            input_digest: format!("sha256:{hex}"),
            verdicts: self.verdicts,
            certificates: self.certificates,
            artifacts: self.artifacts,
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}
