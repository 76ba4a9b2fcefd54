//! Deployment drops, adaptive MCS selection, coverage and capacity.

mod capacity;
mod coverage;
mod scenario;
mod select;

pub use capacity::{
    avg_transport_blocks, blocks_per_message, capacity_per_sm, capacity_vs_k, evaluate_capacity,
    sector_capacity, CapacityModel, CapacityRow, CapacityVsK, BPSK_TB_BITS, TB_RATE_PER_S,
};
pub use coverage::{max_cell_diameter, outage_probability, snr_cdf, EmpiricalCdf, OutageSamples};
pub use scenario::{
    drop_sms, drops, DeploymentDrop, Scenario, SmRecord, MAX_DISTANCE_FACTOR, MIN_DISTANCE_KM,
};
pub use select::{
    connected_sms, mcs_probabilities, select_mcs, select_mcs_in, McsDistribution, RateTable, Scheme,
    BPSK_RATE_BPS,
};

/// Cell radii of the reference urban and rural deployments.
pub const URBAN_RADII_KM: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
pub const RURAL_RADII_KM: [f64; 5] = [2.0, 4.0, 6.0, 8.0, 10.0];
