use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::scenario::DeploymentDrop;
use crate::error::{invalid, Result};
use crate::linklevel::ThresholdTable;
use crate::modem::{McsId, MFSK_ORDERS};

/// Link-adaptation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum Scheme {
    /// Highest-rate MFSK order whose threshold is met; optionally BPSK joins
    /// the candidate pool.
    AdaptiveMfsk { include_bpsk: bool },
    /// BPSK only.
    Bpsk,
}

impl Scheme {
    pub const ADAPTIVE_MFSK: Scheme = Scheme::AdaptiveMfsk { include_bpsk: false };

    pub fn pool(&self) -> Vec<McsId> {
        match *self {
            Scheme::AdaptiveMfsk { include_bpsk } => {
                let mut v: Vec<McsId> = MFSK_ORDERS.iter().map(|&m| McsId::Mfsk(m)).collect();
                if include_bpsk {
                    v.push(McsId::Bpsk);
                }
                v
            }
            Scheme::Bpsk => vec![McsId::Bpsk],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::AdaptiveMfsk { include_bpsk: false } => f.write_str("mfsk"),
            Scheme::AdaptiveMfsk { include_bpsk: true } => f.write_str("mfsk+bpsk"),
            Scheme::Bpsk => f.write_str("bpsk"),
        }
    }
}

impl From<Scheme> for String {
    fn from(s: Scheme) -> String {
        s.to_string()
    }
}

/// Data rate of each MCS in bit/s.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    rates: BTreeMap<McsId, f64>,
}

pub const BPSK_RATE_BPS: f64 = 1.792e6;

impl Default for RateTable {
    /// BPSK at 1.792 Mbit/s and MFSK-M at `log2(M)/M` of that.
    fn default() -> Self {
        let mut rates = BTreeMap::new();
        rates.insert(McsId::Bpsk, BPSK_RATE_BPS);
        for &m in &MFSK_ORDERS {
            let mcs = McsId::Mfsk(m);
            rates.insert(mcs, BPSK_RATE_BPS * mcs.spectral_ratio());
        }
        Self { rates }
    }
}

impl RateTable {
    pub fn get(&self, mcs: McsId) -> f64 {
        self.rates[&mcs]
    }

    pub fn iter(&self) -> impl Iterator<Item = (McsId, f64)> + '_ {
        self.rates.iter().map(|(&k, &v)| (k, v))
    }
}

/// Picks the highest-rate MCS of `scheme` whose threshold `snr_db`
/// meets; ties go to the smaller order. `None` means unconnected.
pub fn select_mcs_in(
    snr_db: f64,
    thresholds: &ThresholdTable,
    scheme: Scheme,
    rates: &RateTable,
) -> Option<McsId> {
    let mut best: Option<(McsId, f64)> = None;
    for mcs in scheme.pool() {
        let Some(g) = thresholds.get(mcs) else { continue };
        if g > snr_db {
            continue;
        }
        let r = rates.get(mcs);
        let better = match best {
            None => true,
            Some((b, br)) => r > br || (r == br && order_key(mcs) < order_key(b)),
        };
        if better {
            best = Some((mcs, r));
        }
    }
    best.map(|(m, _)| m)
}

fn order_key(mcs: McsId) -> u32 {
    mcs.order().unwrap_or(2)
}

/// Adaptive MFSK selection: the smallest M whose threshold is met.
pub fn select_mcs(snr_db: f64, thresholds: &ThresholdTable) -> Option<McsId> {
    select_mcs_in(snr_db, thresholds, Scheme::ADAPTIVE_MFSK, &RateTable::default())
}

/// Fraction of meters using each MCS, with their rates.
#[derive(Debug, Clone, PartialEq)]
pub struct McsDistribution {
    pub probabilities: BTreeMap<McsId, f64>,
    pub rates: BTreeMap<McsId, f64>,
    pub sm_count: usize,
    pub connected: usize,
}

impl McsDistribution {
    /// Mass of unconnected meters.
    pub fn residual(&self) -> f64 {
        1.0 - self.probabilities.values().sum::<f64>()
    }
}

pub fn mcs_probabilities(
    drop: &DeploymentDrop,
    thresholds: &ThresholdTable,
    scheme: Scheme,
    rates: &RateTable,
) -> Result<McsDistribution> {
    let mut counts: BTreeMap<McsId, usize> = scheme.pool().into_iter().map(|m| (m, 0)).collect();
    for snr in drop.snrs() {
        if let Some(m) = select_mcs_in(snr, thresholds, scheme, rates) {
            *counts.get_mut(&m).expect("selection comes from the pool") += 1;
        }
    }
    let k = drop.len();
    let connected = counts.values().sum();
    let probabilities = counts
        .iter()
        .map(|(&m, &c)| (m, if k == 0 { 0.0 } else { c as f64 / k as f64 }))
        .collect();
    let rates = counts.keys().map(|&m| (m, rates.get(m))).collect();
    if k == 0 {
        return invalid("empty drop");
    }
    Ok(McsDistribution {
        probabilities,
        rates,
        sm_count: k,
        connected,
    })
}

/// Meters at or above the most robust threshold of the scheme.
pub fn connected_sms(drop: &DeploymentDrop, thresholds: &ThresholdTable, scheme: Scheme) -> usize {
    let floor = scheme
        .pool()
        .into_iter()
        .filter_map(|m| thresholds.get(m))
        .fold(f64::INFINITY, f64::min);
    drop.snrs().filter(|&s| s >= floor).count()
}
