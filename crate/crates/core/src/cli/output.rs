use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::CliError;

/// Provenance written next to every CSV as `<name>.manifest.toml`.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub file: String,
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config_sha256: String,
    pub threshold_source: String,
    pub wall_clock_s: f64,
    pub created_unix_s: u64,
}

pub fn config_hash(config_toml: &str) -> String {
    hex::encode(Sha256::digest(config_toml.as_bytes()))
}

pub struct Output {
    dir: PathBuf,
    command: String,
    seed: u64,
    config_sha256: String,
    threshold_source: String,
    pub written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path, command: &str, seed: u64, config_toml: &str, threshold_source: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.to_string(),
            seed,
            config_sha256: config_hash(config_toml),
            threshold_source: threshold_source.to_string(),
            written: Vec::new(),
        })
    }

    /// Writes `rows` as `name` and its manifest.
    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T], elapsed: Duration) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path).map_err(crate::Error::from)?;
        for r in rows {
            w.serialize(r).map_err(crate::Error::from)?;
        }
        w.flush()?;
        self.manifest(name, elapsed)?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Writes a file produced by `write` and its manifest.
    pub fn file(
        &mut self,
        name: &str,
        elapsed: Duration,
        write: impl FnOnce(&mut fs::File) -> crate::Result<()>,
    ) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path)?;
        write(&mut f)?;
        self.manifest(name, elapsed)?;
        self.written.push(path.clone());
        Ok(path)
    }

    fn manifest(&self, name: &str, elapsed: Duration) -> Result<(), CliError> {
        let m = Manifest {
            file: name.to_string(),
            command: self.command.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            config_sha256: self.config_sha256.clone(),
            threshold_source: self.threshold_source.clone(),
            wall_clock_s: elapsed.as_secs_f64(),
            created_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        };
        let text = toml::to_string(&m).map_err(|e| CliError::Runtime(e.to_string()))?;
        fs::write(self.dir.join(format!("{name}.manifest.toml")), text)?;
        Ok(())
    }
}
