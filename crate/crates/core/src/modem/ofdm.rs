//! OFDM framing with a unitary DFT: `x[n] = N^-1/2 * sum_k X[k] e^{+j2pi kn/N}`.
//! Each symbol is prefixed by a copy of its last `cp_len` samples.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Grid, OfdmParams};
use crate::error::{invalid, Result};

/// Reusable FFT plans for one numerology.
pub struct OfdmEngine {
    params: OfdmParams,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    buf: Vec<Complex64>,
}

impl std::fmt::Debug for OfdmEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OfdmEngine").field("params", &self.params).finish_non_exhaustive()
    }
}

impl OfdmEngine {
    pub fn new(params: OfdmParams) -> Result<Self> {
        params.validate()?;
        let mut planner = FftPlanner::new();
        let inverse = planner.plan_fft_inverse(params.n_fft);
        let forward = planner.plan_fft_forward(params.n_fft);
        let scratch_len = inverse
            .get_inplace_scratch_len()
            .max(forward.get_inplace_scratch_len());
        Ok(Self {
            params,
            inverse,
            forward,
            scratch: vec![Complex64::default(); scratch_len],
            buf: vec![Complex64::default(); params.n_fft],
        })
    }

    pub fn params(&self) -> &OfdmParams {
        &self.params
    }

    /// Frequency grid to time samples (CP + body per symbol).
    pub fn frame(&mut self, grid: &Grid) -> Result<Vec<Complex64>> {
        let (n, cp) = (self.params.n_fft, self.params.cp_len);
        if grid.n_fft() != n {
            return invalid(format!("grid has {} subcarriers, expected {n}", grid.n_fft()));
        }
        let norm = 1.0 / (n as f64).sqrt();
        let mut out = Vec::with_capacity(grid.n_symbols() * (n + cp));
        for sym in grid.symbols() {
            self.buf.copy_from_slice(sym);
            self.inverse.process_with_scratch(&mut self.buf, &mut self.scratch);
            for x in &mut self.buf {
                *x *= norm;
            }
            out.extend_from_slice(&self.buf[n - cp..]);
            out.extend_from_slice(&self.buf);
        }
        Ok(out)
    }

    /// Time samples back to the frequency grid, discarding each prefix.
    pub fn deframe(&mut self, samples: &[Complex64]) -> Result<Grid> {
        let (n, cp) = (self.params.n_fft, self.params.cp_len);
        if samples.len() % (n + cp) != 0 {
            return invalid(format!(
                "{} samples is not a multiple of the {}-sample symbol",
                samples.len(),
                n + cp
            ));
        }
        let norm = 1.0 / (n as f64).sqrt();
        let mut data = Vec::with_capacity(samples.len() / (n + cp) * n);
        for sym in samples.chunks_exact(n + cp) {
            self.buf.copy_from_slice(&sym[cp..]);
            self.forward.process_with_scratch(&mut self.buf, &mut self.scratch);
            data.extend(self.buf.iter().map(|x| x * norm));
        }
        Ok(Grid::from_vec(n, data))
    }
}

pub fn ofdm_frame(grid: &Grid, params: &OfdmParams) -> Result<Vec<Complex64>> {
    OfdmEngine::new(*params)?.frame(grid)
}

pub fn ofdm_deframe(samples: &[Complex64], params: &OfdmParams) -> Result<Grid> {
    OfdmEngine::new(*params)?.deframe(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn random_grid(rng: &mut impl Rng, n_fft: usize, n_sym: usize) -> Grid {
        let data = (0..n_fft * n_sym)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Grid::from_vec(n_fft, data)
    }

    #[test]
    fn single_tone_is_a_complex_exponential_with_cyclic_prefix() {
        let p = OfdmParams::default();
        let mut g = Grid::zeros(256, 1);
        g.symbol_mut(0)[5] = Complex64::new(1.0, 0.0);
        let x = ofdm_frame(&g, &p).unwrap();
        assert_eq!(x.len(), 288);
        for (n, s) in x[32..].iter().enumerate() {
            let want = Complex64::from_polar(1.0 / 16.0, TAU * 5.0 * n as f64 / 256.0);
            assert!((s - want).norm() < 1e-12);
        }
        assert_eq!(&x[..32], &x[256..288]);
    }

    #[test]
    fn round_trip_and_parseval() {
        let p = OfdmParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_grid(&mut rng, 256, 3);
        let mut eng = OfdmEngine::new(p).unwrap();
        let x = eng.frame(&g).unwrap();
        let back = eng.deframe(&x).unwrap();
        for (a, b) in g.as_slice().iter().zip(back.as_slice()) {
            assert!((a - b).norm() < 1e-10);
        }
        for (s, sym) in x.chunks(288).enumerate() {
            let time: f64 = sym[32..].iter().map(|v| v.norm_sqr()).sum();
            assert!((time - g.symbol_energy(s)).abs() < 1e-10);
            assert_eq!(&sym[..32], &sym[256..]);
        }
    }

    #[test]
    fn length_mismatches_rejected() {
        let p = OfdmParams::default();
        assert!(ofdm_deframe(&vec![Complex64::default(); 287], &p).is_err());
        assert!(ofdm_frame(&Grid::zeros(128, 1), &p).is_err());
    }
}
