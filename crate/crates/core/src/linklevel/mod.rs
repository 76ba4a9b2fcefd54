//! Monte-Carlo packet error rate over the coded AWGN chain and threshold
//! extraction.

mod chain;
mod per;
mod table;

pub use chain::{ChainScratch, LinkChain, MfskScaling, NoiseDomain};
pub use per::{
    extract_threshold, find_threshold, per_curve, run_noiseless, run_per_point, PerPoint, StopRule,
    ThresholdResult, ThresholdSearch,
};
pub use table::{Provenance, ThresholdTable};
