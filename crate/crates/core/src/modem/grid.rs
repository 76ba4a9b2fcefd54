use num_complex::Complex64;

/// Frequency-domain resource grid: `n_symbols` OFDM symbols of `n_fft`
/// subcarrier values, stored symbol-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_fft: usize,
    data: Vec<Complex64>,
}

impl Grid {
    pub fn zeros(n_fft: usize, n_symbols: usize) -> Self {
        Self {
            n_fft,
            data: vec![Complex64::new(0.0, 0.0); n_fft * n_symbols],
        }
    }

    /// Panics if `data.len()` is not a multiple of `n_fft`.
    pub fn from_vec(n_fft: usize, data: Vec<Complex64>) -> Self {
        assert!(n_fft > 0 && data.len() % n_fft == 0, "grid data does not tile n_fft");
        Self { n_fft, data }
    }

    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    pub fn n_symbols(&self) -> usize {
        self.data.len() / self.n_fft
    }

    pub fn symbol(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n_fft..(i + 1) * self.n_fft]
    }

    pub fn symbol_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.n_fft..(i + 1) * self.n_fft]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks_exact(self.n_fft)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    /// Sum of `|x|^2` over one symbol.
    pub fn symbol_energy(&self, i: usize) -> f64 {
        self.symbol(i).iter().map(|x| x.norm_sqr()).sum()
    }
}
