use std::collections::BTreeMap;

use serde::Serialize;

use super::scenario::{drops, Scenario};
use super::select::{connected_sms, mcs_probabilities, McsDistribution, RateTable, Scheme};
use crate::channel::Direction;
use crate::error::{invalid, Result};
use crate::linklevel::ThresholdTable;
use crate::modem::{McsId, MFSK_ORDERS};

pub const MESSAGE_OVERHEAD_BYTES: u64 = 42;
pub const UPLINK_MESSAGE_BYTES: u64 = 2133;
pub const DOWNLINK_MESSAGE_BYTES: u64 = 25;
pub const TB_RATE_PER_S: f64 = 21_000.0;
pub const BPSK_TB_BITS: f64 = 12.0;

/// Message size, transport-block sizes and block rate.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityModel {
    pub message_len_bits: u64,
    /// Transport-block size in bits, possibly fractional for high-order
    /// MFSK.
    pub tb_size_bits: BTreeMap<McsId, f64>,
    pub tb_rate: f64,
}

impl CapacityModel {
    /// Default sizes: BPSK blocks of 12 bits, MFSK-M blocks scaled by
    /// `log2(M)/M`.
    pub fn new(direction: Direction) -> Self {
        let payload = match direction {
            Direction::Uplink => UPLINK_MESSAGE_BYTES,
            Direction::Downlink => DOWNLINK_MESSAGE_BYTES,
        };
        let mut tb_size_bits = BTreeMap::new();
        tb_size_bits.insert(McsId::Bpsk, BPSK_TB_BITS);
        for &m in &MFSK_ORDERS {
            let mcs = McsId::Mfsk(m);
            tb_size_bits.insert(mcs, BPSK_TB_BITS * mcs.spectral_ratio());
        }
        Self {
            message_len_bits: (payload + MESSAGE_OVERHEAD_BYTES) * 8,
            tb_size_bits,
            tb_rate: TB_RATE_PER_S,
        }
    }

    pub fn blocks(&self, mcs: McsId) -> Result<u64> {
        match self.tb_size_bits.get(&mcs) {
            Some(&tb) => blocks_per_message(self.message_len_bits, tb),
            None => invalid(format!("no transport block size for {mcs}")),
        }
    }
}

/// `ceil(L / tb)`. Quotients within 1e-9 of an integer count as that
/// integer so that fractional block sizes do not round up spuriously.
pub fn blocks_per_message(message_len_bits: u64, tb_size_bits: f64) -> Result<u64> {
    if !(tb_size_bits > 0.0) || !tb_size_bits.is_finite() {
        return invalid(format!("transport block size {tb_size_bits} must be positive"));
    }
    if message_len_bits == 0 {
        return invalid("message length must be positive");
    }
    let q = message_len_bits as f64 / tb_size_bits;
    let r = q.round();
    Ok(if (q - r).abs() < 1e-9 * r.max(1.0) { r } else { q.ceil() } as u64)
}

/// `K * sum_i P_i N_i`.
pub fn avg_transport_blocks(
    sm_count: usize,
    dist: &McsDistribution,
    blocks: &BTreeMap<McsId, u64>,
) -> Result<f64> {
    let mut sum = 0.0;
    for (mcs, &p) in &dist.probabilities {
        if p < 0.0 {
            return invalid("negative probability");
        }
        if p == 0.0 {
            continue;
        }
        let Some(&n) = blocks.get(mcs) else {
            return invalid(format!("no block count for {mcs}"));
        };
        sum += p * n as f64;
    }
    Ok(sm_count as f64 * sum)
}

/// Upper bound of the rate per meter, `L / (N_TB / R_TB)`. With no blocks
/// to send the bound is unbounded and reported as `f64::INFINITY`.
pub fn capacity_per_sm(model: &CapacityModel, n_tb: f64) -> f64 {
    if n_tb <= 0.0 {
        return f64::INFINITY;
    }
    model.message_len_bits as f64 / (n_tb / model.tb_rate)
}

/// `sum_i C_i P_i` in bit/s.
pub fn sector_capacity(dist: &McsDistribution) -> f64 {
    dist.probabilities
        .iter()
        .map(|(m, p)| p * dist.rates[m])
        .sum()
}

/// Drop-averaged results for one scenario and scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityRow {
    pub env: crate::channel::EnvKind,
    pub direction: Direction,
    pub radius_km: f64,
    pub scheme: Scheme,
    pub sm_count: usize,
    pub connected_sms: f64,
    pub sector_throughput_mbps: f64,
    pub capacity_per_sm_bps: f64,
    /// Average transport blocks per message round.
    pub n_tb: f64,
}

/// Averages over the drops of `scenario`: sector throughput and connected
/// meters are means over drops; the per-meter capacity uses the mean
/// block count.
pub fn evaluate_capacity(
    scenario: &Scenario,
    thresholds: &ThresholdTable,
    schemes: &[Scheme],
    rates: &RateTable,
) -> Result<Vec<CapacityRow>> {
    let all = drops(scenario)?;
    if all.is_empty() {
        return invalid("scenario has no drops");
    }
    let model = CapacityModel::new(scenario.direction);
    let blocks: BTreeMap<McsId, u64> = model
        .tb_size_bits
        .keys()
        .map(|&m| model.blocks(m).map(|n| (m, n)))
        .collect::<Result<_>>()?;
    let n = all.len() as f64;
    schemes
        .iter()
        .map(|&scheme| {
            let (mut thr, mut conn, mut ntb) = (0.0, 0.0, 0.0);
            for d in &all {
                let dist = mcs_probabilities(d, thresholds, scheme, rates)?;
                thr += sector_capacity(&dist);
                conn += connected_sms(d, thresholds, scheme) as f64;
                ntb += avg_transport_blocks(d.len(), &dist, &blocks)?;
            }
            Ok(CapacityRow {
                env: scenario.env.kind,
                direction: scenario.direction,
                radius_km: scenario.cell_radius_km,
                scheme,
                sm_count: scenario.sm_count(),
                connected_sms: conn / n,
                sector_throughput_mbps: thr / n / 1e6,
                capacity_per_sm_bps: capacity_per_sm(&model, ntb / n),
                n_tb: ntb / n,
            })
        })
        .collect()
}

/// Per-meter capacity as the sector population grows, with the MCS mix of
/// `scenario` held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityVsK {
    pub k: usize,
    pub scheme: Scheme,
    pub connected_sms: f64,
    pub sector_throughput_mbps: f64,
    pub capacity_per_sm_bps: f64,
}

pub fn capacity_vs_k(
    scenario: &Scenario,
    thresholds: &ThresholdTable,
    schemes: &[Scheme],
    ks: &[usize],
) -> Result<Vec<CapacityVsK>> {
    let rates = RateTable::default();
    let base = evaluate_capacity(scenario, thresholds, schemes, &rates)?;
    let model = CapacityModel::new(scenario.direction);
    let mut out = Vec::new();
    for row in &base {
        // blocks per meter and connected fraction are independent of K
        let per_sm_blocks = row.n_tb / row.sm_count as f64;
        let frac = row.connected_sms / row.sm_count as f64;
        for &k in ks {
            out.push(CapacityVsK {
                k,
                scheme: row.scheme,
                connected_sms: frac * k as f64,
                sector_throughput_mbps: row.sector_throughput_mbps,
                capacity_per_sm_bps: capacity_per_sm(&model, per_sm_blocks * k as f64),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(p: &[(McsId, f64)]) -> McsDistribution {
        let rates = RateTable::default();
        McsDistribution {
            probabilities: p.iter().copied().collect(),
            rates: p.iter().map(|&(m, _)| (m, rates.get(m))).collect(),
            sm_count: 0,
            connected: 0,
        }
    }

    #[test]
    fn message_lengths() {
        assert_eq!(CapacityModel::new(Direction::Uplink).message_len_bits, 17_400);
        assert_eq!(CapacityModel::new(Direction::Downlink).message_len_bits, 536);
    }

    #[test]
    fn block_counts() {
        assert_eq!(blocks_per_message(1000, 300.0).unwrap(), 4);
        assert_eq!(blocks_per_message(300, 300.0).unwrap(), 1);
        assert!(blocks_per_message(300, 0.0).is_err());
        let m = CapacityModel::new(Direction::Uplink);
        assert_eq!(m.blocks(McsId::Bpsk).unwrap(), 1450);
        assert_eq!(m.blocks(McsId::Mfsk(2)).unwrap(), 2900);
        assert_eq!(m.blocks(McsId::Mfsk(256)).unwrap(), 46_400);
        // repeated subtraction
        for tb in [7.0, 12.0, 85.0, 1.5, 0.375, 4.5, 1.125] {
            let (mut left, mut n) = (17_400.0f64, 0u64);
            while left > 1e-9 {
                left -= tb;
                n += 1;
            }
            assert_eq!(blocks_per_message(17_400, tb).unwrap(), n, "tb {tb}");
        }
    }

    #[test]
    fn transport_block_average() {
        let mut blocks = BTreeMap::new();
        blocks.insert(McsId::Mfsk(2), 2);
        blocks.insert(McsId::Mfsk(4), 4);
        let d = dist(&[(McsId::Mfsk(2), 1.0)]);
        let mut b1 = BTreeMap::new();
        b1.insert(McsId::Mfsk(2), 4);
        assert_eq!(avg_transport_blocks(100, &d, &b1).unwrap(), 400.0);
        let d = dist(&[(McsId::Mfsk(2), 0.5), (McsId::Mfsk(4), 0.5)]);
        assert_eq!(avg_transport_blocks(10, &d, &blocks).unwrap(), 30.0);
        let d = dist(&[(McsId::Mfsk(2), 0.0)]);
        assert_eq!(avg_transport_blocks(10, &d, &blocks).unwrap(), 0.0);
    }

    #[test]
    fn per_sm_capacity() {
        let m = CapacityModel::new(Direction::Uplink);
        assert_eq!(capacity_per_sm(&m, 21_000.0), 17_400.0);
        assert_eq!(capacity_per_sm(&m, 0.0), f64::INFINITY);
        let a = capacity_per_sm(&m, 5000.0);
        assert!((capacity_per_sm(&m, 10_000.0) - a / 2.0).abs() < 1e-9);
    }

    #[test]
    fn sector_capacity_examples() {
        assert_eq!(sector_capacity(&dist(&[(McsId::Bpsk, 1.0)])), 1.792e6);
        assert_eq!(sector_capacity(&dist(&[(McsId::Mfsk(256), 1.0)])), 56_000.0);
        let mixed = dist(&[(McsId::Mfsk(2), 0.25), (McsId::Mfsk(16), 0.5)]);
        assert_eq!(sector_capacity(&mixed), 0.25 * 896_000.0 + 0.5 * 448_000.0);
    }
}
