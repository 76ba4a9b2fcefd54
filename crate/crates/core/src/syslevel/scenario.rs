use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{draw_shadowing, Direction, EnvKind, Environment, LinkBudget};
use crate::error::{invalid, Result};
use crate::rng;

/// One deployment to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub env: Environment,
    pub cell_radius_km: f64,
    pub direction: Direction,
    pub min_distance_km: f64,
    /// Meters are placed out to this multiple of the cell radius.
    pub max_distance_factor: f64,
    pub n_drops: usize,
    pub seed: u64,
}

pub const MIN_DISTANCE_KM: f64 = 0.05;
/// Half the inter-site distance of a three-sector layout.
pub const MAX_DISTANCE_FACTOR: f64 = 1.5;

impl Scenario {
    pub fn new(kind: EnvKind, cell_radius_km: f64, direction: Direction) -> Self {
        Self {
            env: Environment::of(kind),
            cell_radius_km,
            direction,
            min_distance_km: MIN_DISTANCE_KM,
            max_distance_factor: MAX_DISTANCE_FACTOR,
            n_drops: 100,
            seed: 1,
        }
    }

    pub fn with_drops(mut self, n_drops: usize) -> Self {
        self.n_drops = n_drops;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min_distance_km > 0.0) {
            return invalid("minimum distance must be positive");
        }
        if !(self.cell_radius_km > self.min_distance_km) || !self.cell_radius_km.is_finite() {
            return invalid(format!(
                "cell radius {} km must exceed the minimum distance {} km",
                self.cell_radius_km, self.min_distance_km
            ));
        }
        if !(self.max_distance_factor >= 1.0) {
            return invalid("max distance factor must be at least 1");
        }
        Ok(())
    }

    /// Meters per sector, `floor(rho pi R^2)`.
    pub fn sm_count(&self) -> usize {
        (self.env.sm_density * PI * self.cell_radius_km * self.cell_radius_km).floor() as usize
    }

    pub fn max_distance_km(&self) -> f64 {
        self.max_distance_factor * self.cell_radius_km
    }

    pub fn budget(&self) -> LinkBudget {
        LinkBudget::for_direction(self.direction)
    }

    /// Distance for a uniform variate `u`, uniform in area over the annulus.
    pub(crate) fn distance_for(&self, u: f64) -> f64 {
        let (a, b) = (self.min_distance_km, self.max_distance_km());
        (a * a + u * (b * b - a * a)).sqrt()
    }

    fn stream_tags(&self, drop: u64) -> [u64; 4] {
        let env = match self.env.kind {
            EnvKind::Urban => 1,
            EnvKind::Rural => 2,
        };
        // the direction is left out so that uplink and downlink see the same meters
        [0xD80F, env, self.cell_radius_km.to_bits(), drop]
    }
}

/// One meter of a drop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmRecord {
    pub distance_km: f64,
    /// Azimuth from the site, radians in [0, 2 pi).
    pub azimuth: f64,
    pub shadow_db: f64,
    pub snr_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentDrop {
    pub sms: Vec<SmRecord>,
}

impl DeploymentDrop {
    pub fn len(&self) -> usize {
        self.sms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sms.is_empty()
    }

    pub fn snrs(&self) -> impl Iterator<Item = f64> + '_ {
        self.sms.iter().map(|s| s.snr_db)
    }
}

/// Places `sm_count()` meters and evaluates their SNR.
pub fn drop_sms<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<DeploymentDrop> {
    scenario.validate()?;
    let budget = scenario.budget();
    let sms = (0..scenario.sm_count())
        .map(|_| {
            let distance_km = scenario.distance_for(rng.random::<f64>());
            let azimuth = rng.random::<f64>() * TAU;
            let shadow_db = draw_shadowing(rng, budget.shadow_sigma_db);
            let off = budget.antenna.serving_offset(azimuth);
            let snr_db = budget.snr_at(&scenario.env, distance_km, shadow_db, off)?;
            Ok(SmRecord {
                distance_km,
                azimuth,
                shadow_db,
                snr_db,
            })
        })
        .collect::<Result<_>>()?;
    Ok(DeploymentDrop { sms })
}

/// All `n_drops` drops of a scenario, each from its own stream.
pub fn drops(scenario: &Scenario) -> Result<Vec<DeploymentDrop>> {
    scenario.validate()?;
    (0..scenario.n_drops as u64)
        .into_par_iter()
        .map(|i| drop_sms(scenario, &mut rng::stream(scenario.seed, &scenario.stream_tags(i))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sm_counts() {
        assert_eq!(Scenario::new(EnvKind::Urban, 0.5, Direction::Uplink).sm_count(), 1570);
        assert_eq!(Scenario::new(EnvKind::Rural, 4.0, Direction::Uplink).sm_count(), 502);
    }

    #[test]
    fn invalid_radius_rejected() {
        let s = Scenario::new(EnvKind::Urban, 0.04, Direction::Uplink);
        assert!(drop_sms(&s, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn distances_are_uniform_in_area() {
        let s = Scenario::new(EnvKind::Urban, 0.5, Direction::Uplink);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut d: Vec<f64> = (0..n).map(|_| s.distance_for(rng.random())).collect();
        d.sort_by(f64::total_cmp);
        let (a, b) = (s.min_distance_km, s.max_distance_km());
        assert!(d[0] >= a && d[n - 1] <= b);
        let cdf = |x: f64| (x * x - a * a) / (b * b - a * a);
        let ks = d
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n as f64).abs().max((f - (i + 1) as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        // 1% critical value
        assert!(ks < 1.63 / (n as f64).sqrt(), "{ks}");
    }

    #[test]
    fn drops_are_reproducible_and_share_meters_across_directions() {
        let ul = Scenario::new(EnvKind::Urban, 0.25, Direction::Uplink).with_drops(3);
        let dl = Scenario {
            direction: Direction::Downlink,
            ..ul
        };
        let a = drops(&ul).unwrap();
        assert_eq!(a, drops(&ul).unwrap());
        let b = drops(&dl).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.len(), 392);
            for (p, q) in x.sms.iter().zip(&y.sms) {
                assert_eq!(p.distance_km, q.distance_km);
                assert!((q.snr_db - p.snr_db - 4.0).abs() < 1e-9);
            }
        }
    }
}
