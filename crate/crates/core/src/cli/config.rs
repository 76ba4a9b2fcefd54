use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::channel::{Direction, EnvKind};
use crate::linklevel::NoiseDomain;

/// Settings read from a TOML file. Every field is optional; command-line
/// flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub threshold_source: Option<ThresholdSource>,
    /// Threshold CSV used instead of the bundled or simulated table.
    pub threshold_file: Option<PathBuf>,
    /// Allow falling back to the bundled reference thresholds.
    pub bundled_thresholds: Option<bool>,
    pub env: Option<EnvKind>,
    pub direction: Option<Direction>,
    pub radius_km: Option<Vec<f64>>,
    pub mcs: Option<Vec<String>>,
    pub n_drops: Option<usize>,
    pub outage_samples: Option<usize>,
    pub include_bpsk: Option<bool>,
    pub min_errors: Option<u64>,
    pub max_packets: Option<u64>,
    pub target_per: Option<f64>,
    pub snr_start_db: Option<f64>,
    pub snr_stop_db: Option<f64>,
    pub snr_step_db: Option<f64>,
    pub noise_domain: Option<NoiseDomain>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdSource {
    Simulate,
    #[default]
    Paper,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}
