//! Command-line front end.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::channel::{Direction, EnvKind};
use crate::linklevel::{NoiseDomain, StopRule};
use crate::modem::McsId;

pub use config::{FileConfig, ThresholdSource};
pub use output::{config_hash, Manifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Sim(#[from] crate::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ofdm-mfsk", version, about = "OFDM-MFSK and OFDM-BPSK smart-metering link and system simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML file with default settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "OFDM_MFSK_WORKERS")]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub threshold_source: Option<ThresholdSource>,
    #[arg(long, global = true)]
    pub env: Option<EnvKind>,
    /// ul or dl.
    #[arg(long, global = true)]
    pub direction: Option<Direction>,
    /// Cell radius in km; repeat or comma-separate for several.
    #[arg(long, global = true, value_delimiter = ',')]
    pub radius_km: Option<Vec<f64>>,
    /// MCS list such as `all`, `bpsk,mfsk-16` or `4,8`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub mcs: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// PER against SNR on a fixed grid.
    PerCurve,
    /// Simulated PER thresholds.
    Thresholds,
    /// Distribution of meter SNR.
    SnrCdf,
    /// Outage against cell radius and the 5% coverage radius.
    Coverage,
    /// Sector throughput, per-meter capacity and connected meters.
    Capacity,
    /// Every table and curve.
    ReproduceAll,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PerCurve => "per-curve",
            Command::Thresholds => "thresholds",
            Command::SnrCdf => "snr-cdf",
            Command::Coverage => "coverage",
            Command::Capacity => "capacity",
            Command::ReproduceAll => "reproduce-all",
        }
    }
}

/// Effective settings after merging flags, file and defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub workers: Option<usize>,
    pub out: PathBuf,
    pub threshold_source: ThresholdSource,
    pub threshold_file: Option<PathBuf>,
    pub bundled_thresholds: bool,
    pub env: Option<EnvKind>,
    pub direction: Option<Direction>,
    pub radius_km: Option<Vec<f64>>,
    pub mcs: Vec<String>,
    pub n_drops: usize,
    pub outage_samples: usize,
    pub include_bpsk: bool,
    pub min_errors: u64,
    pub max_packets: u64,
    pub target_per: f64,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub noise_domain: NoiseDomain,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let stop = StopRule::default();
        let s = Settings {
            seed: cli.seed.or(file.seed).unwrap_or(1),
            workers: cli.workers.or(file.workers),
            out: cli.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            threshold_source: cli.threshold_source.or(file.threshold_source).unwrap_or_default(),
            threshold_file: file.threshold_file,
            bundled_thresholds: file.bundled_thresholds.unwrap_or(true),
            env: cli.env.or(file.env),
            direction: cli.direction.or(file.direction),
            radius_km: cli.radius_km.clone().or(file.radius_km),
            mcs: cli.mcs.clone().or(file.mcs).unwrap_or_else(|| vec!["all".into()]),
            n_drops: file.n_drops.unwrap_or(100),
            outage_samples: file.outage_samples.unwrap_or(100_000),
            include_bpsk: file.include_bpsk.unwrap_or(false),
            min_errors: file.min_errors.unwrap_or(stop.min_errors),
            max_packets: file.max_packets.unwrap_or(stop.max_packets),
            target_per: file.target_per.unwrap_or(1e-3),
            snr_start_db: file.snr_start_db.unwrap_or(-16.0),
            snr_stop_db: file.snr_stop_db.unwrap_or(4.0),
            snr_step_db: file.snr_step_db.unwrap_or(1.0),
            noise_domain: file.noise_domain.unwrap_or_default(),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.workers == Some(0) {
            return bad("workers must be at least 1");
        }
        if self.n_drops == 0 || self.outage_samples == 0 {
            return bad("n_drops and outage_samples must be positive");
        }
        if self.min_errors == 0 || self.max_packets == 0 {
            return bad("min_errors and max_packets must be positive");
        }
        if !(self.target_per > 0.0 && self.target_per < 1.0) {
            return bad("target_per must lie in (0, 1)");
        }
        if !(self.snr_step_db > 0.0) || !(self.snr_stop_db >= self.snr_start_db) {
            return bad("SNR grid needs step > 0 and stop >= start");
        }
        if let Some(r) = &self.radius_km {
            if r.is_empty() || r.iter().any(|&x| !(x > crate::syslevel::MIN_DISTANCE_KM) || !x.is_finite()) {
                return bad("radius_km values must exceed 0.05 km");
            }
        }
        self.mcs_list()?;
        Ok(())
    }

    pub fn mcs_list(&self) -> Result<Vec<McsId>, CliError> {
        let mut out = Vec::new();
        for item in &self.mcs {
            if item.trim().eq_ignore_ascii_case("all") {
                out.extend(McsId::all());
            } else {
                out.push(item.parse().map_err(|e: crate::Error| CliError::Config(e.to_string()))?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn stop_rule(&self) -> StopRule {
        StopRule {
            min_errors: self.min_errors,
            max_packets: self.max_packets,
        }
    }

    pub fn snr_grid(&self) -> Vec<f64> {
        let n = ((self.snr_stop_db - self.snr_start_db) / self.snr_step_db + 1e-9).floor() as usize;
        (0..=n).map(|i| self.snr_start_db + i as f64 * self.snr_step_db).collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }
}

/// Parses arguments, runs the command and maps failures to exit codes
/// (2 for configuration errors, 3 for runtime errors).
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs `cli` and returns the files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let settings = Settings::resolve(cli)?;
    if let Some(n) = settings.workers {
        // a pool built earlier in the same process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    commands::run(cli.command, &settings)
}
