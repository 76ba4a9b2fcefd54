use crate::error::{invalid, Result};

/// Binary-reflected Gray labelling of the `M` subcarriers of an MFSK subset.
///
/// Bit position 0 is the first bit of the group (the label's most
/// significant bit). `sets_zero[n]` / `sets_one[n]` hold the subset indices
/// whose label has a 0 / 1 at position `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayMapping {
    m: usize,
    bits: usize,
    label_of_index: Vec<u32>,
    index_of_label: Vec<u32>,
    sets_zero: Vec<Vec<usize>>,
    sets_one: Vec<Vec<usize>>,
}

impl GrayMapping {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() || m > 1 << 16 {
            return invalid(format!("subset size {m} is not a power of two >= 2"));
        }
        let bits = m.trailing_zeros() as usize;
        let label_of_index: Vec<u32> = (0..m as u32).map(|i| i ^ (i >> 1)).collect();
        let mut index_of_label = vec![0u32; m];
        for (i, &l) in label_of_index.iter().enumerate() {
            index_of_label[l as usize] = i as u32;
        }
        let mut sets_zero = vec![Vec::with_capacity(m / 2); bits];
        let mut sets_one = vec![Vec::with_capacity(m / 2); bits];
        for (i, &l) in label_of_index.iter().enumerate() {
            for n in 0..bits {
                if l >> (bits - 1 - n) & 1 == 1 {
                    sets_one[n].push(i);
                } else {
                    sets_zero[n].push(i);
                }
            }
        }
        Ok(Self {
            m,
            bits,
            label_of_index,
            index_of_label,
            sets_zero,
            sets_one,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `log2(M)`.
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Label of subset index `i` as bits, position 0 first.
    pub fn label(&self, i: usize) -> Vec<u8> {
        let l = self.label_of_index[i];
        (0..self.bits)
            .map(|n| (l >> (self.bits - 1 - n) & 1) as u8)
            .collect()
    }

    pub(crate) fn label_word(&self, i: usize) -> u32 {
        self.label_of_index[i]
    }

    /// Subset index whose label equals `bits`.
    pub fn map(&self, bits: &[u8]) -> Result<usize> {
        if bits.len() != self.bits {
            return invalid(format!(
                "{} bits supplied for a {}-ary mapping",
                bits.len(),
                self.m
            ));
        }
        Ok(self.map_unchecked(bits))
    }

    pub(crate) fn map_unchecked(&self, bits: &[u8]) -> usize {
        let word = bits.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1));
        self.index_of_label[word as usize] as usize
    }

    pub fn set_zero(&self, n: usize) -> &[usize] {
        &self.sets_zero[n]
    }

    pub fn set_one(&self, n: usize) -> &[usize] {
        &self.sets_one[n]
    }
}
