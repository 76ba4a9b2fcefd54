//! Deterministic random streams.
//!
//! Every Monte-Carlo unit of work (a packet, a drop) gets its own ChaCha
//! stream keyed by the run seed and a tuple of tags, so results do not
//! depend on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a list of tags into a single 64-bit stream identifier.
pub fn stream_id(tags: &[u64]) -> u64 {
    tags.iter()
        .fold(GOLDEN, |acc, &t| splitmix(acc ^ splitmix(t)))
}

/// Random stream for `seed` and the given tags.
pub fn stream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(tags));
    rng
}
