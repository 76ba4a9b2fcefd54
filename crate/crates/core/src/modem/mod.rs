//! OFDM-MFSK and OFDM-BPSK baseband modem.
//!
//! MFSK groups the data subcarriers into contiguous subsets of `M`
//! subcarriers and lights exactly one subcarrier per subset, chosen by a
//! Gray-coded group of `log2(M)` bits, with a uniformly random phase.
//! BPSK puts one antipodal symbol on every data subcarrier.
//!
//! Power convention: every OFDM symbol carries `power_norm` in total across
//! its subcarriers, whatever the MCS. The SNR of a link is total signal power
//! over total in-band noise power, `power_norm / (n_fft * sigma^2)`, where
//! `sigma^2` is the complex noise variance per subcarrier (equivalently per
//! time-domain sample under the unitary DFT used here).

mod demap;
mod dump;
mod gray;
mod grid;
mod mapper;
mod ofdm;
mod params;

pub use demap::{bpsk_demap, bpsk_llr, mfsk_demap, mfsk_llr, SubsetObservation};
pub use dump::{write_grid_csv, write_llr_csv};
pub use gray::GrayMapping;
pub use grid::Grid;
pub use mapper::{bpsk_modulate, mfsk_modulate, modulate, padded_len};
pub use ofdm::{ofdm_deframe, ofdm_frame, OfdmEngine};
pub use params::{bits_per_ofdm_symbol, noise_variance_for_snr, McsId, OfdmParams, MFSK_ORDERS};
