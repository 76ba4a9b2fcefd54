//! Link-level and system-level simulation of OFDM-MFSK and OFDM-BPSK
//! radio links for smart-metering deployments.
//!
//! The crate is split along the processing chain:
//!
//! * [`fec`]: rate-1/2 LDPC code, sum-product decoder and bit interleaver.
//! * [`modem`]: OFDM framing, MFSK and BPSK mapping, soft demapping.
//! * [`channel`]: AWGN and the macro-cell link budget.
//! * [`linklevel`]: Monte-Carlo PER curves and SNR threshold extraction.
//! * [`syslevel`]: smart-meter drops, coverage and capacity analysis.
//! * [`cli`]: configuration-driven runner emitting CSV reports.
//!
//! Project-wide LLR convention: a positive LLR favours bit 0.

pub mod channel;
pub mod cli;
pub mod error;
pub mod fec;
pub mod linklevel;
pub mod modem;
pub mod rng;
pub mod syslevel;

pub use error::{Error, Result};
