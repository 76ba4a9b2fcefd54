use std::sync::OnceLock;

use super::gf2::DenseGf2;
use super::peg;
use crate::error::{invalid, Result};

/// Seed of the progressive-edge-growth construction of the standard code.
pub const DEFAULT_CODE_SEED: u64 = 0x5EED_0408;
/// Decoder iteration cap.
pub const DEFAULT_MAX_ITERATIONS: usize = 50;

const VAR_DEGREE: usize = 3;
const CHECK_DEGREE: usize = 6;

/// A binary LDPC code given by a sparse parity-check matrix, with a
/// systematic encoder derived from it.
///
/// Codeword positions `info_positions()` carry the message bits in order;
/// the remaining positions carry parity. For codes built by
/// [`LdpcCode::regular`] the message occupies the first `k` positions.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    n: usize,
    k: usize,
    max_iterations: usize,
    seed: Option<u64>,
    // check-major edge list: edges of check c are check_ptr[c]..check_ptr[c+1]
    pub(super) check_ptr: Vec<usize>,
    pub(super) edge_var: Vec<usize>,
    // variable-major view of the same edges
    pub(super) var_ptr: Vec<usize>,
    pub(super) var_edges: Vec<usize>,
    info_cols: Vec<usize>,
    // parity_cols[i] is the codeword position solved by reduced row i
    parity_cols: Vec<usize>,
    // row t: bitmask over reduced rows flipped by message bit t
    parity_gen: Vec<u64>,
    gen_words: usize,
}

impl LdpcCode {
    /// The (3,6)-regular n=408, k=204 code used throughout the simulator.
    pub fn standard() -> &'static LdpcCode {
        static CODE: OnceLock<LdpcCode> = OnceLock::new();
        CODE.get_or_init(|| {
            LdpcCode::regular(408, 204, DEFAULT_CODE_SEED)
                .expect("standard code construction is deterministic and valid")
        })
    }

    /// Builds a (3,6)-regular rate-1/2 code by progressive edge growth.
    ///
    /// Seeds are tried from `seed` upward until the construction yields a
    /// full-rank parity-check matrix; the seed that succeeded is kept in
    /// [`LdpcCode::seed`]. Columns are relabelled so that the message bits
    /// occupy positions `0..k`.
    pub fn regular(n: usize, k: usize, seed: u64) -> Result<Self> {
        if n == 0 || n != 2 * k || (n * VAR_DEGREE) % CHECK_DEGREE != 0 {
            return invalid(format!("({n}, {k}) is not a rate-1/2 (3,6)-regular geometry"));
        }
        let m = n - k;
        for attempt in 0..64u64 {
            let s = seed.wrapping_add(attempt);
            let Some(rows) = peg::regular_graph(n, m, VAR_DEGREE, CHECK_DEGREE, s) else {
                continue;
            };
            let red = DenseGf2::from_rows(n, &rows).reduce((0..n).rev());
            if red.pivots.len() < m {
                continue;
            }
            // message columns first, parity columns last
            let mut is_pivot = vec![false; n];
            for &p in &red.pivots {
                is_pivot[p] = true;
            }
            let order: Vec<usize> = (0..n)
                .filter(|&c| !is_pivot[c])
                .chain((0..n).filter(|&c| is_pivot[c]))
                .collect();
            let mut relabel = vec![0; n];
            for (new, &old) in order.iter().enumerate() {
                relabel[old] = new;
            }
            let rows: Vec<Vec<usize>> = rows
                .iter()
                .map(|r| {
                    let mut r: Vec<usize> = r.iter().map(|&c| relabel[c]).collect();
                    r.sort_unstable();
                    r
                })
                .collect();
            let mut code = Self::from_parity_checks(n, &rows)?;
            code.seed = Some(s);
            debug_assert!(code.info_cols.iter().copied().eq(0..k));
            return Ok(code);
        }
        invalid(format!("no full-rank construction found from seed {seed}"))
    }

    /// Builds a code from parity-check rows (each a list of codeword
    /// positions). The matrix must have full row rank.
    pub fn from_parity_checks(n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 || m >= n {
            return invalid(format!("{m} parity checks for codeword length {n}"));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.is_empty() {
                return invalid(format!("parity check {i} is empty"));
            }
            if r.iter().any(|&c| c >= n) {
                return invalid(format!("parity check {i} references a position >= {n}"));
            }
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("parity check {i} is not strictly increasing"));
            }
        }
        let red = DenseGf2::from_rows(n, rows).reduce((0..n).rev());
        if red.pivots.len() < m {
            return invalid(format!(
                "parity-check matrix has rank {} < {m}",
                red.pivots.len()
            ));
        }
        let k = n - m;
        let mut is_pivot = vec![false; n];
        for &p in &red.pivots {
            is_pivot[p] = true;
        }
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let gen_words = m.div_ceil(64);
        let mut parity_gen = vec![0u64; k * gen_words];
        for (t, &col) in info_cols.iter().enumerate() {
            for r in 0..m {
                if red.matrix.get(r, col) {
                    parity_gen[t * gen_words + r / 64] |= 1 << (r % 64);
                }
            }
        }

        let mut check_ptr = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::new();
        check_ptr.push(0);
        for r in rows {
            edge_var.extend_from_slice(r);
            check_ptr.push(edge_var.len());
        }
        let mut by_var: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &v) in edge_var.iter().enumerate() {
            by_var[v].push(e);
        }
        if let Some(v) = by_var.iter().position(|e| e.is_empty()) {
            return invalid(format!("codeword position {v} is not checked by any row"));
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_ptr.push(0);
        for e in by_var {
            var_edges.extend(e);
            var_ptr.push(var_edges.len());
        }

        Ok(Self {
            n,
            k,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            seed: None,
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
            info_cols,
            parity_cols: red.pivots,
            parity_gen,
            gen_words,
        })
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Result<Self> {
        if max_iterations == 0 {
            return invalid("max_iterations must be positive");
        }
        self.max_iterations = max_iterations;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_checks(&self) -> usize {
        self.n - self.k
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    /// Construction seed, for codes built by [`LdpcCode::regular`].
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Codeword positions of parity check `c`.
    pub fn check(&self, c: usize) -> &[usize] {
        &self.edge_var[self.check_ptr[c]..self.check_ptr[c + 1]]
    }

    /// Codeword positions holding the message bits, in message order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_cols
    }

    /// Encodes a `k`-bit message (entries 0/1) into an `n`-bit codeword.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return invalid(format!(
                "message has {} bits, code expects {}",
                message.len(),
                self.k
            ));
        }
        let mut parity = vec![0u64; self.gen_words];
        for (t, &bit) in message.iter().enumerate() {
            if bit & 1 == 1 {
                let g = &self.parity_gen[t * self.gen_words..(t + 1) * self.gen_words];
                for (p, w) in parity.iter_mut().zip(g) {
                    *p ^= w;
                }
            }
        }
        let mut cw = vec![0u8; self.n];
        for (&pos, &bit) in self.info_cols.iter().zip(message) {
            cw[pos] = bit & 1;
        }
        for (r, &pos) in self.parity_cols.iter().enumerate() {
            cw[pos] = (parity[r / 64] >> (r % 64) & 1) as u8;
        }
        Ok(cw)
    }

    /// True when every parity check is satisfied.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n
            && (0..self.num_checks())
                .all(|c| self.check(c).iter().fold(0u8, |acc, &v| acc ^ (word[v] & 1)) == 0)
    }

    /// Extracts the message bits from a codeword-length hard decision.
    pub fn message_of(&self, word: &[u8]) -> Vec<u8> {
        self.info_cols.iter().map(|&p| word[p]).collect()
    }

    /// Dense row rank of the parity-check matrix.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<usize>> = (0..self.num_checks()).map(|c| self.check(c).to_vec()).collect();
        DenseGf2::from_rows(self.n, &rows).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_message(rng: &mut impl Rng, k: usize) -> Vec<u8> {
        (0..k).map(|_| rng.random_range(0..2u8)).collect()
    }

    #[test]
    fn standard_code_shape() {
        let code = LdpcCode::standard();
        assert_eq!(code.n(), 408);
        assert_eq!(code.k(), 204);
        assert_eq!(code.num_edges(), 408 * 3);
        assert_eq!(code.rank(), 204);
        assert!((0..204).all(|c| code.check(c).len() == 6));
        assert_eq!(code.info_positions(), (0..204).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn standard_code_has_no_four_cycles() {
        let code = LdpcCode::standard();
        let mut shared = std::collections::HashSet::new();
        for c in 0..code.num_checks() {
            let row = code.check(c);
            for (i, &a) in row.iter().enumerate() {
                for &b in &row[i + 1..] {
                    assert!(shared.insert((a, b)), "columns {a},{b} share two checks");
                }
            }
        }
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let code = LdpcCode::standard();
        assert!(code.encode(&[0; 204]).unwrap().iter().all(|&b| b == 0));
    }

    #[test]
    fn codewords_satisfy_checks_and_are_systematic() {
        let code = LdpcCode::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = random_message(&mut rng, 204);
            let cw = code.encode(&m).unwrap();
            assert!(code.is_codeword(&cw));
            assert_eq!(&cw[..204], m.as_slice());
            assert_eq!(code.message_of(&cw), m);
        }
    }

    #[test]
    fn wrong_length_message_rejected() {
        let code = LdpcCode::standard();
        assert!(code.encode(&[0; 203]).is_err());
        assert!(code.encode(&[0; 408]).is_err());
    }

    #[test]
    fn rank_deficient_matrix_rejected() {
        // third check is the sum of the first two
        let rows = vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 1, 3, 4]];
        assert!(LdpcCode::from_parity_checks(6, &rows).is_err());
    }

    #[test]
    fn non_systematic_layout_still_encodes() {
        // Hamming(7,4) with checks arranged so the pivots are not a suffix
        let rows = vec![vec![0, 2, 4, 6], vec![1, 2, 5, 6], vec![3, 4, 5, 6]];
        let code = LdpcCode::from_parity_checks(7, &rows).unwrap();
        assert_eq!(code.k(), 4);
        for v in 0..16u8 {
            let m: Vec<u8> = (0..4).map(|i| v >> i & 1).collect();
            let cw = code.encode(&m).unwrap();
            assert!(code.is_codeword(&cw));
            assert_eq!(code.message_of(&cw), m);
        }
    }
}
