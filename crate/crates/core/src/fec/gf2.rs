//! Dense GF(2) row operations used for rank checks and encoder derivation.

#[derive(Debug, Clone)]
pub(crate) struct DenseGf2 {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

/// Result of Gauss-Jordan elimination.
pub(crate) struct Reduced {
    pub matrix: DenseGf2,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl DenseGf2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                m.flip(r, c);
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    /// `row[dst] ^= row[src]`
    fn add_row(&mut self, dst: usize, src: usize) {
        for w in 0..self.words {
            let v = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= v;
        }
    }

    /// Gauss-Jordan elimination visiting columns in `order`.
    pub fn reduce(mut self, order: impl IntoIterator<Item = usize>) -> Reduced {
        let mut pivots = Vec::new();
        for c in order {
            let rank = pivots.len();
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.add_row(r, rank);
                }
            }
            pivots.push(c);
        }
        Reduced {
            matrix: self,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(0..self.cols).pivots.len()
    }
}
