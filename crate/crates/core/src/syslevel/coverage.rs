use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use super::scenario::{DeploymentDrop, Scenario};
use crate::channel::{draw_shadowing, noise_power, Direction, Environment, LinkBudget};
use crate::error::{invalid, Result};

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("empirical CDF of no samples");
        }
        if values.iter().any(|v| v.is_nan()) {
            return invalid("NaN sample");
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }
}

/// Pooled SNR distribution of one or more drops.
pub fn snr_cdf<'a>(drops: impl IntoIterator<Item = &'a DeploymentDrop>) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(drops.into_iter().flat_map(|d| d.snrs()).collect())
}

/// Largest distance at which a meter with median shadowing, seen at the
/// median off-boresight angle of its sector, still reaches `gamma0_db`;
/// returned as a diameter in km.
pub fn max_cell_diameter(gamma0_db: f64, env: &Environment, budget: &LinkBudget) -> Result<f64> {
    if budget.direction != Direction::Uplink {
        return invalid("cell diameter is dimensioned on the uplink");
    }
    let margin = budget.p_tx_dbm + budget.g_tx_dbi + budget.g_rx_dbi
        + budget.antenna.gain_db(budget.antenna.median_offset())
        - gamma0_db
        - noise_power(&budget.noise)
        - env.l0
        - budget.l_penetration_db
        - budget.l_indoor_db;
    let d = 10f64.powf(margin / (10.0 * env.n_exp));
    if !d.is_finite() || d <= 0.0 {
        return invalid(format!("no positive diameter for threshold {gamma0_db} dB"));
    }
    Ok(d)
}

/// Meter placements reused across cell radii. Each sample keeps its
/// uniform area variate, azimuth and shadowing, so outage can only grow
/// with the radius.
#[derive(Debug, Clone)]
pub struct OutageSamples {
    u: Vec<f64>,
    offset: Vec<f64>,
    shadow: Vec<f64>,
}

impl OutageSamples {
    pub fn draw<R: Rng + ?Sized>(n: usize, budget: &LinkBudget, rng: &mut R) -> Self {
        let mut s = Self {
            u: Vec::with_capacity(n),
            offset: Vec::with_capacity(n),
            shadow: Vec::with_capacity(n),
        };
        for _ in 0..n {
            s.u.push(rng.random::<f64>());
            s.offset.push(budget.antenna.serving_offset(rng.random::<f64>() * TAU));
            s.shadow.push(draw_shadowing(rng, budget.shadow_sigma_db));
        }
        s
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Fraction of samples with SNR at or below `gamma0_db` when the cell
    /// radius is that of `scenario`.
    pub fn outage(&self, scenario: &Scenario, gamma0_db: f64) -> Result<f64> {
        scenario.validate()?;
        if self.is_empty() {
            return invalid("no outage samples");
        }
        let budget = scenario.budget();
        let failed = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let d = scenario.distance_for(self.u[i]);
                budget
                    .snr_at(&scenario.env, d, self.shadow[i], self.offset[i])
                    .map(|snr| u64::from(snr <= gamma0_db))
            })
            .sum::<Result<u64>>()?;
        Ok(failed as f64 / self.len() as f64)
    }

    /// Largest cell radius in `[lo_km, hi_km]` whose outage does not
    /// exceed `target`, to within `tol_km`.
    pub fn coverage_radius(
        &self,
        scenario: &Scenario,
        gamma0_db: f64,
        target: f64,
        (lo_km, hi_km): (f64, f64),
        tol_km: f64,
    ) -> Result<f64> {
        let at = |r: f64| {
            self.outage(
                &Scenario {
                    cell_radius_km: r,
                    ..*scenario
                },
                gamma0_db,
            )
        };
        let (mut lo, mut hi) = (lo_km, hi_km);
        if at(lo)? > target {
            return invalid(format!("outage already above {target} at {lo} km"));
        }
        if at(hi)? <= target {
            return Ok(hi);
        }
        while hi - lo > tol_km {
            let mid = 0.5 * (lo + hi);
            if at(mid)? <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Monte-Carlo `Pr[SNR <= gamma0]` over `n_samples` fresh placements.
pub fn outage_probability<R: Rng + ?Sized>(
    scenario: &Scenario,
    gamma0_db: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    OutageSamples::draw(n_samples, &scenario.budget(), rng).outage(scenario, gamma0_db)
}
