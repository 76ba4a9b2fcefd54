//! Forward error correction: a rate-1/2 LDPC code with a sum-product decoder,
//! plus the bit interleaver placed between the encoder and the modem.
//!
//! LLR convention: positive means bit 0 is more likely.

mod alist;
mod decoder;
mod gf2;
mod interleaver;
mod ldpc;
mod peg;

pub use decoder::{DecodeOutcome, DecoderScratch};
pub use interleaver::{Interleaver, DEFAULT_INTERLEAVER_SEED};
pub use ldpc::{LdpcCode, DEFAULT_CODE_SEED, DEFAULT_MAX_ITERATIONS};

/// Information block length of the standard code.
pub const MESSAGE_BITS: usize = 204;
/// Codeword length of the standard code.
pub const CODEWORD_BITS: usize = 408;

/// LLR magnitude used when turning hard bits into "certain" soft values.
pub const CERTAIN_LLR: f64 = 20.0;

/// Maps hard bits to noiseless LLRs (bit 0 -> +`CERTAIN_LLR`).
pub fn bits_to_llrs(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b == 0 { CERTAIN_LLR } else { -CERTAIN_LLR })
        .collect()
}
