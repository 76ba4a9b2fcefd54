use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use super::config::ThresholdSource;
use super::output::Output;
use super::{CliError, Command, Settings};
use crate::channel::{Direction, EnvKind, Environment, LinkBudget};
use crate::linklevel::{
    find_threshold, per_curve, LinkChain, PerPoint, Provenance, ThresholdSearch, ThresholdTable,
};
use crate::modem::McsId;
use crate::rng;
use crate::syslevel::{
    capacity_vs_k, drops, evaluate_capacity, max_cell_diameter, snr_cdf, OutageSamples, RateTable,
    Scenario, Scheme, RURAL_RADII_KM, URBAN_RADII_KM,
};

#[derive(Debug, Serialize)]
struct PerRow {
    mcs: String,
    m: Option<u32>,
    snr_db: f64,
    packets: u64,
    errors: u64,
    per: f64,
    ci95: f64,
}

impl PerRow {
    fn new(mcs: McsId, p: &PerPoint) -> Self {
        Self {
            mcs: mcs.to_string(),
            m: mcs.order(),
            snr_db: p.snr_db,
            packets: p.packets,
            errors: p.errors,
            per: p.per,
            ci95: p.ci95,
        }
    }
}

#[derive(Debug, Serialize)]
struct CdfRow {
    snr_db: f64,
    cdf: f64,
}

#[derive(Debug, Serialize)]
struct OutageRow {
    env: EnvKind,
    direction: Direction,
    radius_km: f64,
    outage_mfsk: f64,
    outage_bpsk: f64,
}

#[derive(Debug, Serialize)]
struct CoverageRow {
    env: EnvKind,
    direction: Direction,
    scheme: Scheme,
    gamma0_db: f64,
    target_outage: f64,
    radius_km: f64,
}

#[derive(Debug, Serialize)]
struct DiameterRow {
    mcs: String,
    m: Option<u32>,
    gamma0_db: f64,
    urban_km: f64,
    rural_km: f64,
}

pub const TARGET_OUTAGE: f64 = 0.05;

pub fn run(command: Command, s: &Settings) -> Result<Vec<PathBuf>, CliError> {
    let source = match s.threshold_source {
        ThresholdSource::Simulate => "simulate",
        ThresholdSource::Paper => "paper",
    };
    let mut out = Output::new(&s.out, command.name(), s.seed, &s.to_toml(), source)?;
    match command {
        Command::PerCurve => per_curves(s, &mut out)?,
        Command::Thresholds => {
            simulate_thresholds(s, &s.mcs_list()?, &mut out)?;
        }
        Command::SnrCdf => cdf(s, &mut out)?,
        Command::Coverage => {
            let t = thresholds(s, &mut out)?;
            coverage(s, &t, &mut out)?;
        }
        Command::Capacity => {
            let t = thresholds(s, &mut out)?;
            capacity(s, &t, &mut out)?;
        }
        Command::ReproduceAll => {
            let t = thresholds(s, &mut out)?;
            cdf(s, &mut out)?;
            coverage(s, &t, &mut out)?;
            capacity(s, &t, &mut out)?;
        }
    }
    Ok(out.written)
}

fn chain(s: &Settings, mcs: McsId) -> Result<LinkChain, CliError> {
    Ok(LinkChain::new(mcs)?.with_noise_domain(s.noise_domain))
}

fn per_curves(s: &Settings, out: &mut Output) -> Result<(), CliError> {
    let t0 = Instant::now();
    let grid = s.snr_grid();
    let mut rows = Vec::new();
    for mcs in s.mcs_list()? {
        for p in per_curve(&chain(s, mcs)?, &grid, s.stop_rule(), s.seed)? {
            rows.push(PerRow::new(mcs, &p));
        }
    }
    out.csv("per_curve.csv", &rows, t0.elapsed())?;
    Ok(())
}

fn simulate_thresholds(s: &Settings, mcs: &[McsId], out: &mut Output) -> Result<ThresholdTable, CliError> {
    let t0 = Instant::now();
    let search = ThresholdSearch {
        target_per: s.target_per,
        ..ThresholdSearch::default()
    };
    let mut table = ThresholdTable::new(s.target_per, Provenance::Simulated, Some(s.seed));
    let mut rows = Vec::new();
    for &m in mcs {
        let r = find_threshold(&chain(s, m)?, &search, s.stop_rule(), s.seed)?;
        eprintln!("{m}: gamma0 = {:.2} dB", r.gamma0_db);
        table.insert(m, r.gamma0_db)?;
        rows.extend(r.fine.iter().map(|p| PerRow::new(m, p)));
    }
    let elapsed = t0.elapsed();
    out.file("thresholds.csv", elapsed, |f| table.write_csv(f))?;
    out.csv("threshold_curves.csv", &rows, elapsed)?;
    Ok(table)
}

/// Thresholds for the system-level commands.
fn thresholds(s: &Settings, out: &mut Output) -> Result<ThresholdTable, CliError> {
    if let Some(path) = &s.threshold_file {
        let f = std::fs::File::open(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let t = ThresholdTable::read_csv(f).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if !t.covers_mfsk() || t.get(McsId::Bpsk).is_none() {
            return Err(CliError::Config(format!("{} lacks some MCS thresholds", path.display())));
        }
        return Ok(t);
    }
    match s.threshold_source {
        ThresholdSource::Paper if s.bundled_thresholds => Ok(ThresholdTable::paper()),
        ThresholdSource::Paper => Err(CliError::Config(
            "threshold source is the reference table but bundled thresholds are disabled and no threshold_file is set"
                .into(),
        )),
        ThresholdSource::Simulate => simulate_thresholds(s, &McsId::all(), out),
    }
}

fn default_radius(env: EnvKind) -> f64 {
    match env {
        EnvKind::Urban => 0.5,
        EnvKind::Rural => 4.0,
    }
}

fn envs(s: &Settings) -> Vec<EnvKind> {
    s.env.map_or(vec![EnvKind::Urban, EnvKind::Rural], |e| vec![e])
}

fn directions(s: &Settings) -> Vec<Direction> {
    s.direction.map_or(vec![Direction::Uplink, Direction::Downlink], |d| vec![d])
}

fn scenario(s: &Settings, env: EnvKind, radius: f64, direction: Direction) -> Scenario {
    Scenario::new(env, radius, direction)
        .with_drops(s.n_drops)
        .with_seed(s.seed)
}

fn cdf(s: &Settings, out: &mut Output) -> Result<(), CliError> {
    let t0 = Instant::now();
    let env = s.env.unwrap_or(EnvKind::Urban);
    let direction = s.direction.unwrap_or(Direction::Uplink);
    let radius = s.radius_km.as_ref().map_or(default_radius(env), |r| r[0]);
    let all = drops(&scenario(s, env, radius, direction))?;
    let c = snr_cdf(&all)?;
    let (lo, hi) = (c.samples()[0].floor(), c.samples()[c.len() - 1].ceil());
    let rows: Vec<CdfRow> = (0..=((hi - lo) * 2.0) as usize)
        .map(|i| {
            let x = lo + 0.5 * i as f64;
            CdfRow { snr_db: x, cdf: c.eval(x) }
        })
        .collect();
    eprintln!(
        "{env} R={radius} km {direction}: CDF(-10 dB) = {:.3}, CDF(0 dB) = {:.3}",
        c.eval(-10.0),
        c.eval(0.0)
    );
    out.csv("snr_cdf.csv", &rows, t0.elapsed())?;
    Ok(())
}

fn radius_grid(env: EnvKind) -> Vec<f64> {
    match env {
        EnvKind::Urban => (3..=60).map(|i| 0.025 * i as f64).collect(),
        EnvKind::Rural => (1..=48).map(|i| 0.25 * i as f64).collect(),
    }
}

fn coverage(s: &Settings, t: &ThresholdTable, out: &mut Output) -> Result<(), CliError> {
    let t0 = Instant::now();
    let g_mfsk = t.get(McsId::Mfsk(256)).ok_or_else(|| CliError::Config("no MFSK-256 threshold".into()))?;
    let g_bpsk = t.get(McsId::Bpsk).ok_or_else(|| CliError::Config("no BPSK threshold".into()))?;
    let mut rows = Vec::new();
    let mut radii = Vec::new();
    for env in envs(s) {
        for direction in directions(s) {
            let base = scenario(s, env, default_radius(env), direction);
            let mut r = rng::stream(s.seed, &[0x07A6E, env as u64]);
            let samples = OutageSamples::draw(s.outage_samples, &base.budget(), &mut r);
            let grid = s.radius_km.clone().unwrap_or_else(|| radius_grid(env));
            for &radius in &grid {
                let sc = Scenario {
                    cell_radius_km: radius,
                    ..base
                };
                rows.push(OutageRow {
                    env,
                    direction,
                    radius_km: radius,
                    outage_mfsk: samples.outage(&sc, g_mfsk)?,
                    outage_bpsk: samples.outage(&sc, g_bpsk)?,
                });
            }
            let hi = match env {
                EnvKind::Urban => 5.0,
                EnvKind::Rural => 30.0,
            };
            for (scheme, g) in [(Scheme::ADAPTIVE_MFSK, g_mfsk), (Scheme::Bpsk, g_bpsk)] {
                let radius_km = samples.coverage_radius(&base, g, TARGET_OUTAGE, (0.051, hi), 1e-4)?;
                eprintln!("{env} {direction} {scheme}: 5% outage radius {radius_km:.3} km");
                radii.push(CoverageRow {
                    env,
                    direction,
                    scheme,
                    gamma0_db: g,
                    target_outage: TARGET_OUTAGE,
                    radius_km,
                });
            }
        }
    }
    let elapsed = t0.elapsed();
    out.csv("outage_vs_radius.csv", &rows, elapsed)?;
    out.csv("coverage_radius.csv", &radii, elapsed)?;
    let ul = LinkBudget::uplink();
    let diam = McsId::all()
        .into_iter()
        .filter_map(|m| t.get(m).map(|g| (m, g)))
        .map(|(m, g)| {
            Ok(DiameterRow {
                mcs: m.to_string(),
                m: m.order(),
                gamma0_db: g,
                urban_km: max_cell_diameter(g, &Environment::urban(), &ul)?,
                rural_km: max_cell_diameter(g, &Environment::rural(), &ul)?,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    out.csv("cell_diameter.csv", &diam, t0.elapsed())?;
    Ok(())
}

fn capacity(s: &Settings, t: &ThresholdTable, out: &mut Output) -> Result<(), CliError> {
    let t0 = Instant::now();
    let schemes = [
        Scheme::AdaptiveMfsk {
            include_bpsk: s.include_bpsk,
        },
        Scheme::Bpsk,
    ];
    let rates = RateTable::default();
    let mut rows = Vec::new();
    let mut vs_k = Vec::new();
    for env in envs(s) {
        let radii = s.radius_km.clone().unwrap_or_else(|| match env {
            EnvKind::Urban => URBAN_RADII_KM.to_vec(),
            EnvKind::Rural => RURAL_RADII_KM.to_vec(),
        });
        for direction in directions(s) {
            for &radius in &radii {
                let sc = scenario(s, env, radius, direction);
                for row in evaluate_capacity(&sc, t, &schemes, &rates)? {
                    eprintln!(
                        "{env} {direction} R={radius} {}: {:.3} Mbps, {:.2} bps/SM, {:.0} connected",
                        row.scheme, row.sector_throughput_mbps, row.capacity_per_sm_bps, row.connected_sms
                    );
                    rows.push(row);
                }
            }
            if direction == Direction::Uplink {
                let sc = scenario(s, env, default_radius(env), direction);
                let k = sc.sm_count();
                let ks: Vec<usize> = (1..=20).map(|i| (k * i).div_ceil(10)).collect();
                vs_k.extend(capacity_vs_k(&sc, t, &schemes, &ks)?.into_iter().map(|r| (env, r)));
            }
        }
    }
    let elapsed = t0.elapsed();
    out.csv("tables_4_to_7.csv", &rows, elapsed)?;
    #[derive(Serialize)]
    struct KRow {
        env: EnvKind,
        k: usize,
        scheme: Scheme,
        connected_sms: f64,
        sector_throughput_mbps: f64,
        capacity_per_sm_bps: f64,
    }
    let k_rows: Vec<KRow> = vs_k
        .into_iter()
        .map(|(env, r)| KRow {
            env,
            k: r.k,
            scheme: r.scheme,
            connected_sms: r.connected_sms,
            sector_throughput_mbps: r.sector_throughput_mbps,
            capacity_per_sm_bps: r.capacity_per_sm_bps,
        })
        .collect();
    out.csv("capacity_vs_k.csv", &k_rows, elapsed)?;
    Ok(())
}
