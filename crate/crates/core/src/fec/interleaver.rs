use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

/// Seed of the interleaver used by the link-level chain.
pub const DEFAULT_INTERLEAVER_SEED: u64 = 0x1EAF_0408;

/// Seeded uniform random permutation of codeword positions.
///
/// `interleave` emits `out[i] = x[perm[i]]`; `deinterleave` writes
/// `out[perm[i]] = y[i]`, so the two are mutual inverses for bits and LLRs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    seed: Option<u64>,
}

impl Interleaver {
    pub fn new(len: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self {
            perm,
            seed: Some(seed),
        }
    }

    pub fn identity(len: usize) -> Self {
        Self {
            perm: (0..len).collect(),
            seed: None,
        }
    }

    /// Wraps an explicit permutation, checking that it is a bijection.
    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return invalid("not a permutation");
            }
        }
        Ok(Self { perm, seed: None })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn interleave<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        Ok(self.perm.iter().map(|&p| x[p]).collect())
    }

    pub fn deinterleave<T: Copy + Default>(&self, y: &[T]) -> Result<Vec<T>> {
        self.check_len(y.len())?;
        let mut out = vec![T::default(); y.len()];
        for (&p, &v) in self.perm.iter().zip(y) {
            out[p] = v;
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.perm.len() {
            return invalid(format!(
                "sequence of length {len} for interleaver of length {}",
                self.perm.len()
            ));
        }
        Ok(())
    }
}
