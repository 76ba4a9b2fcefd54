use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Propagation environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvKind {
    Urban,
    Rural,
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvKind::Urban => "urban",
            EnvKind::Rural => "rural",
        })
    }
}

impl FromStr for EnvKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "urban" => Ok(EnvKind::Urban),
            "rural" => Ok(EnvKind::Rural),
            _ => invalid(format!("unknown environment {s:?}")),
        }
    }
}

/// Path-loss parameters at 900 MHz and smart-meter density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub kind: EnvKind,
    /// Path loss at 1 km, dB.
    pub l0: f64,
    /// Path-loss exponent.
    pub n_exp: f64,
    /// Smart meters per km^2.
    pub sm_density: f64,
}

impl Environment {
    pub fn urban() -> Self {
        Self {
            kind: EnvKind::Urban,
            l0: 120.9,
            n_exp: 3.76,
            sm_density: 2000.0,
        }
    }

    pub fn rural() -> Self {
        Self {
            kind: EnvKind::Rural,
            l0: 95.5,
            n_exp: 3.41,
            sm_density: 10.0,
        }
    }

    pub fn of(kind: EnvKind) -> Self {
        match kind {
            EnvKind::Urban => Self::urban(),
            EnvKind::Rural => Self::rural(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "ul", alias = "uplink")]
    Uplink,
    #[serde(rename = "dl", alias = "downlink")]
    Downlink,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Uplink => "ul",
            Direction::Downlink => "dl",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ul" | "uplink" => Ok(Direction::Uplink),
            "dl" | "downlink" => Ok(Direction::Downlink),
            _ => invalid(format!("unknown direction {s:?}")),
        }
    }
}

/// Receiver thermal noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub bandwidth_hz: f64,
    pub temperature_k: f64,
    pub noise_figure_db: f64,
}

impl NoiseModel {
    pub fn new(bandwidth_hz: f64, temperature_k: f64, noise_figure_db: f64) -> Self {
        Self {
            bandwidth_hz,
            temperature_k,
            noise_figure_db,
        }
    }
}

/// Thermal noise power in dBm: `-198.6 + 10 log10(B T) + F`.
pub fn noise_power(noise: &NoiseModel) -> f64 {
    -198.6 + 10.0 * (noise.bandwidth_hz * noise.temperature_k).log10() + noise.noise_figure_db
}

/// Horizontal sector pattern `-min(12 (theta/theta_3dB)^2, A_m)` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorAntenna {
    pub theta_3db_deg: f64,
    pub front_to_back_db: f64,
    /// Half-width of the azimuth range served by one sector.
    pub sector_half_width_deg: f64,
}

impl Default for SectorAntenna {
    fn default() -> Self {
        Self {
            theta_3db_deg: 65.0,
            front_to_back_db: 20.0,
            sector_half_width_deg: 60.0,
        }
    }
}

impl SectorAntenna {
    /// Gain relative to boresight, dB, for an off-boresight angle in radians.
    pub fn gain_db(&self, angle_rad: f64) -> f64 {
        let theta = wrap_angle(angle_rad).to_degrees();
        -(12.0 * (theta / self.theta_3db_deg).powi(2)).min(self.front_to_back_db)
    }

    /// Off-boresight angle of an azimuth with respect to the closest of
    /// the equally spaced sector boresights (the first at 0 rad).
    pub fn serving_offset(&self, azimuth_rad: f64) -> f64 {
        let width = 2.0 * self.sector_half_width_deg.to_radians();
        let a = azimuth_rad.rem_euclid(width);
        if a > width / 2.0 {
            a - width
        } else {
            a
        }
    }

    /// Off-boresight angle below which half of a uniformly spread sector
    /// population lies: `sector_half_width / 2`.
    pub fn median_offset(&self) -> f64 {
        (self.sector_half_width_deg / 2.0).to_radians()
    }
}

/// Wraps an angle to (-pi, pi].
fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// Pattern of the default 65-degree, 20 dB sector antenna.
pub fn antenna_pattern(angle_rad: f64) -> f64 {
    SectorAntenna::default().gain_db(angle_rad)
}

/// Link parameters for one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub direction: Direction,
    pub p_tx_dbm: f64,
    pub g_tx_dbi: f64,
    pub g_rx_dbi: f64,
    pub l_penetration_db: f64,
    pub l_indoor_db: f64,
    pub shadow_sigma_db: f64,
    /// Noise of the receiving end (base station on the uplink, meter on
    /// the downlink).
    pub noise: NoiseModel,
    pub antenna: SectorAntenna,
}

pub const BANDWIDTH_HZ: f64 = 3.0e6;
pub const TEMPERATURE_K: f64 = 290.0;
pub const BS_TX_POWER_DBM: f64 = 32.0;
pub const SM_TX_POWER_DBM: f64 = 24.0;
pub const BS_GAIN_DBI: f64 = 12.0;
pub const SM_GAIN_DBI: f64 = 0.0;
pub const BS_NOISE_FIGURE_DB: f64 = 5.0;
pub const SM_NOISE_FIGURE_DB: f64 = 9.0;

impl LinkBudget {
    /// Meter to base station.
    pub fn uplink() -> Self {
        Self {
            direction: Direction::Uplink,
            p_tx_dbm: SM_TX_POWER_DBM,
            g_tx_dbi: SM_GAIN_DBI,
            g_rx_dbi: BS_GAIN_DBI,
            l_penetration_db: 12.0,
            l_indoor_db: 8.0,
            shadow_sigma_db: 10.0,
            noise: NoiseModel::new(BANDWIDTH_HZ, TEMPERATURE_K, BS_NOISE_FIGURE_DB),
            antenna: SectorAntenna::default(),
        }
    }

    /// Base station to meter.
    pub fn downlink() -> Self {
        Self {
            direction: Direction::Downlink,
            p_tx_dbm: BS_TX_POWER_DBM,
            g_tx_dbi: BS_GAIN_DBI,
            g_rx_dbi: SM_GAIN_DBI,
            noise: NoiseModel::new(BANDWIDTH_HZ, TEMPERATURE_K, SM_NOISE_FIGURE_DB),
            ..Self::uplink()
        }
    }

    pub fn for_direction(direction: Direction) -> Self {
        match direction {
            Direction::Uplink => Self::uplink(),
            Direction::Downlink => Self::downlink(),
        }
    }

    /// SNR in dB of a meter at `d_km` with shadowing `shadow_db` and
    /// off-boresight angle `angle_rad`.
    pub fn snr_at(&self, env: &Environment, d_km: f64, shadow_db: f64, angle_rad: f64) -> Result<f64> {
        let outdoor = path_loss(d_km, env, shadow_db)?;
        let loss = total_loss(outdoor, self.l_penetration_db, self.l_indoor_db);
        let a = self.antenna.gain_db(angle_rad);
        Ok(snr_db(self.received_power_with(loss, a), noise_power(&self.noise)))
    }

    fn received_power_with(&self, l_total: f64, pattern_db: f64) -> f64 {
        self.p_tx_dbm + self.g_tx_dbi + pattern_db - l_total + self.g_rx_dbi
    }
}

/// Outdoor path loss in dB: `L0 + 10 n log10(d) + X`.
pub fn path_loss(d_km: f64, env: &Environment, shadow_db: f64) -> Result<f64> {
    if !(d_km > 0.0) || !d_km.is_finite() {
        return invalid(format!("distance {d_km} km must be positive"));
    }
    Ok(env.l0 + 10.0 * env.n_exp * d_km.log10() + shadow_db)
}

/// Zero-mean Gaussian shadowing in dB.
pub fn draw_shadowing<R: Rng + ?Sized>(rng: &mut R, sigma_db: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    sigma_db * z
}

pub fn total_loss(outdoor_db: f64, penetration_db: f64, indoor_db: f64) -> f64 {
    outdoor_db + penetration_db + indoor_db
}

/// Received power in dBm for total loss `l_total_db` and an off-boresight
/// angle of the base-station antenna.
pub fn received_power(budget: &LinkBudget, l_total_db: f64, angle_rad: f64) -> f64 {
    budget.received_power_with(l_total_db, budget.antenna.gain_db(angle_rad))
}

pub fn snr_db(p_rx_dbm: f64, p_n_dbm: f64) -> f64 {
    p_rx_dbm - p_n_dbm
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = 1e-9;

    #[test]
    fn path_loss_reference_points() {
        assert!((path_loss(1.0, &Environment::urban(), 0.0).unwrap() - 120.9).abs() < EPS);
        assert!((path_loss(1.0, &Environment::rural(), 0.0).unwrap() - 95.5).abs() < EPS);
        assert!((path_loss(10.0, &Environment::urban(), 0.0).unwrap() - 158.5).abs() < EPS);
        assert!((path_loss(1.0, &Environment::urban(), 3.0).unwrap() - 123.9).abs() < EPS);
        assert!(path_loss(0.0, &Environment::urban(), 0.0).is_err());
        assert!(path_loss(-1.0, &Environment::urban(), 0.0).is_err());
    }

    #[test]
    fn path_loss_increases_with_distance_and_exponent() {
        let mut env = Environment::urban();
        let mut prev = f64::NEG_INFINITY;
        for i in 1..200 {
            let pl = path_loss(0.01 * i as f64, &env, 0.0).unwrap();
            assert!(pl > prev);
            prev = pl;
        }
        let d = 2.0;
        let base = path_loss(d, &env, 0.0).unwrap();
        env.n_exp += 0.1;
        assert!(path_loss(d, &env, 0.0).unwrap() > base);
    }

    #[test]
    fn loss_chain_examples() {
        assert_eq!(total_loss(100.0, 12.0, 8.0), 120.0);
        assert_eq!(total_loss(0.0, 0.0, 0.0), 0.0);
        assert!((total_loss(120.9, 12.0, 8.0) - 140.9).abs() < EPS);
    }

    #[test]
    fn received_power_examples() {
        let ul = LinkBudget::uplink();
        assert!((received_power(&ul, 140.9, 0.0) + 104.9).abs() < EPS);
        let bare = LinkBudget {
            g_tx_dbi: 0.0,
            g_rx_dbi: 0.0,
            ..ul
        };
        assert_eq!(received_power(&bare, 0.0, 0.0), bare.p_tx_dbm);
        let edge = received_power(&bare, 0.0, PI);
        assert!((edge - (bare.p_tx_dbm - 20.0)).abs() < EPS);
    }

    #[test]
    fn antenna_pattern_examples() {
        assert_eq!(antenna_pattern(0.0), 0.0);
        assert!((antenna_pattern(65f64.to_radians()) + 12.0).abs() < EPS);
        assert!((antenna_pattern(-65f64.to_radians()) + 12.0).abs() < EPS);
        assert_eq!(antenna_pattern(PI), -20.0);
        assert_eq!(antenna_pattern(3.0 * PI), -20.0);
    }

    #[test]
    fn serving_offset_stays_within_sector() {
        let ant = SectorAntenna::default();
        for i in 0..720 {
            let az = (i as f64 * 0.5).to_radians() - PI;
            let off = ant.serving_offset(az);
            assert!(off.abs() <= 60f64.to_radians() + 1e-12, "{az} -> {off}");
        }
        assert!((ant.serving_offset(130f64.to_radians()) - 10f64.to_radians()).abs() < 1e-12);
        assert!((ant.median_offset() - 30f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn noise_power_examples() {
        let p9 = noise_power(&NoiseModel::new(3e6, 290.0, 9.0));
        assert!((p9 + 100.20).abs() < 0.01, "{p9}");
        let p5 = noise_power(&NoiseModel::new(3e6, 290.0, 5.0));
        assert!((p5 + 104.20).abs() < 0.01, "{p5}");
        assert!((noise_power(&NoiseModel::new(1.0, 1.0, 0.0)) + 198.6).abs() < EPS);
        // exact linearity in F and in 10 log10(BT)
        let a = noise_power(&NoiseModel::new(1e6, 300.0, 2.0));
        let b = noise_power(&NoiseModel::new(1e7, 300.0, 5.0));
        assert!((b - a - 13.0).abs() < 1e-9);
    }

    #[test]
    fn snr_examples() {
        assert!((snr_db(-104.9, -104.2) + 0.7).abs() < EPS);
        assert_eq!(snr_db(-93.0, -93.0), 0.0);
        assert_eq!(snr_db(-90.0, -100.0), 10.0);
    }

    #[test]
    fn downlink_minus_uplink_gap() {
        // same meter, same shadowing: only transmit power and receiver noise
        // figure differ between the two directions
        let env = Environment::urban();
        let (ul, dl) = (LinkBudget::uplink(), LinkBudget::downlink());
        let want = (dl.p_tx_dbm - ul.p_tx_dbm) - (dl.noise.noise_figure_db - ul.noise.noise_figure_db);
        assert_eq!(want, 4.0);
        for (d, x, th) in [(0.3, -4.0, 0.2), (1.7, 12.0, -0.9), (0.06, 0.0, 1.0)] {
            let gap = dl.snr_at(&env, d, x, th).unwrap() - ul.snr_at(&env, d, x, th).unwrap();
            assert!((gap - want).abs() < 1e-9);
        }
    }

    #[test]
    fn shadowing_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        assert_eq!(draw_shadowing(&mut rng, 0.0), 0.0);
        let n = 1_000_000;
        let mut xs: Vec<f64> = (0..n).map(|_| draw_shadowing(&mut rng, 10.0)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        assert!(mean.abs() < 0.05, "{mean}");
        assert!((std - 10.0).abs() < 0.1, "{std}");
        xs.sort_by(f64::total_cmp);
        assert!(xs[n / 2].abs() < 0.05);
    }

    #[test]
    fn parse_env_and_direction() {
        assert_eq!("Urban".parse::<EnvKind>().unwrap(), EnvKind::Urban);
        assert_eq!("ul".parse::<Direction>().unwrap(), Direction::Uplink);
        assert_eq!("downlink".parse::<Direction>().unwrap(), Direction::Downlink);
        assert!("suburban".parse::<EnvKind>().is_err());
    }
}
