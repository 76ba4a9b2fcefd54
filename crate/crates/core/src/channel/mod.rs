//! AWGN corruption and the macro-cell link budget.
//!
//! The budget follows the usual dB chain: outdoor path loss
//! `L0 + 10 n log10(d_km) + X` plus one wall (penetration) and an indoor
//! loss; received power `P_tx + G_tx + A(theta) - L_total + G_rx`; thermal
//! noise `-198.6 + 10 log10(B T) + F` dBm; SNR as their difference.

mod awgn;
mod budget;

pub use awgn::{add_awgn, awgn};
pub use budget::{
    antenna_pattern, draw_shadowing, noise_power, path_loss, received_power, snr_db, total_loss,
    Direction, EnvKind, Environment, LinkBudget, NoiseModel, SectorAntenna,
};
