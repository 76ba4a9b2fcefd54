//! Soft demapping to bit LLRs.
//!
//! [`mfsk_llr`] evaluates the non-coherent max-metric
//! `L_n = max_{i in S_n^1} |r_i|^2 - max_{i in S_n^0} |r_i|^2`, which is
//! positive when a 1-labelled subcarrier is strongest. The grid demappers
//! negate and scale it into the project convention (positive favours 0)
//! before it reaches the decoder.

use num_complex::Complex64;

use super::mapper::bpsk_amplitude;
use super::{bits_per_ofdm_symbol, GrayMapping, Grid, McsId, OfdmParams};
use crate::error::{invalid, Result};

/// The `M` received frequency-domain values of one MFSK subset.
#[derive(Debug, Clone, Copy)]
pub struct SubsetObservation<'a> {
    r: &'a [Complex64],
}

impl<'a> SubsetObservation<'a> {
    pub fn new(r: &'a [Complex64], m: usize) -> Result<Self> {
        if r.len() != m {
            return invalid(format!("subset has {} values, expected {m}", r.len()));
        }
        Ok(Self { r })
    }

    pub fn values(&self) -> &'a [Complex64] {
        self.r
    }
}

/// Max-metric bit reliabilities of one subset, in bit-position order.
pub fn mfsk_llr(obs: SubsetObservation<'_>, mapping: &GrayMapping) -> Result<Vec<f64>> {
    if obs.r.len() != mapping.m() {
        return invalid(format!(
            "subset has {} values, mapping expects {}",
            obs.r.len(),
            mapping.m()
        ));
    }
    let mut out = vec![0.0; mapping.bits()];
    subset_metrics(obs.r, mapping, &mut out, &mut Vec::new());
    Ok(out)
}

fn subset_metrics(r: &[Complex64], mapping: &GrayMapping, out: &mut [f64], power: &mut Vec<f64>) {
    let bits = mapping.bits();
    power.clear();
    power.extend(r.iter().map(|x| x.norm_sqr()));
    let mut max0 = [f64::NEG_INFINITY; 16];
    let mut max1 = [f64::NEG_INFINITY; 16];
    for (i, &p) in power.iter().enumerate() {
        let label = mapping.label_word(i);
        for n in 0..bits {
            if label >> (bits - 1 - n) & 1 == 1 {
                max1[n] = max1[n].max(p);
            } else {
                max0[n] = max0[n].max(p);
            }
        }
    }
    for n in 0..bits {
        out[n] = max1[n] - max0[n];
    }
}

/// Decoder LLRs for the first `n_bits` coded bits of an MFSK grid:
/// `-scale * L_n` for every subset in transmission order.
pub fn mfsk_demap(
    grid: &Grid,
    mcs: McsId,
    params: &OfdmParams,
    n_bits: usize,
    scale: f64,
) -> Result<Vec<f64>> {
    let Some(m) = mcs.order() else {
        return invalid("mfsk_demap called with BPSK");
    };
    let m = m as usize;
    let per_symbol = bits_per_ofdm_symbol(mcs, params)?;
    if grid.n_fft() != params.n_fft || grid.n_symbols() * per_symbol < n_bits {
        return invalid("grid too small for the requested number of bits");
    }
    let mapping = GrayMapping::new(m)?;
    let k = mapping.bits();
    let subsets = params.n_data_subcarriers / m;
    let mut llrs = vec![0.0; n_bits.div_ceil(k) * k];
    let mut power = Vec::with_capacity(m);
    for (g, chunk) in llrs.chunks_exact_mut(k).enumerate() {
        let (s, j) = (g / subsets, g % subsets);
        let r = &grid.symbol(s)[j * m..(j + 1) * m];
        subset_metrics(r, &mapping, chunk, &mut power);
        for l in chunk.iter_mut() {
            *l *= -scale;
        }
    }
    llrs.truncate(n_bits);
    Ok(llrs)
}

/// Coherent BPSK LLR for a received value `r` of a symbol with amplitude
/// `amplitude`, with noise variance `noise_var` per real dimension:
/// `2 a Re(r) / noise_var`.
pub fn bpsk_llr(r: Complex64, amplitude: f64, noise_var: f64) -> Result<f64> {
    if !(noise_var > 0.0) || !noise_var.is_finite() {
        return invalid(format!("noise variance {noise_var} must be positive"));
    }
    Ok(2.0 * amplitude * r.re / noise_var)
}

/// Decoder LLRs for the first `n_bits` of a BPSK grid, given the complex
/// noise variance per subcarrier.
pub fn bpsk_demap(grid: &Grid, params: &OfdmParams, n_bits: usize, complex_noise_var: f64) -> Result<Vec<f64>> {
    let n_data = params.n_data_subcarriers;
    if grid.n_fft() != params.n_fft || grid.n_symbols() * n_data < n_bits {
        return invalid("grid too small for the requested number of bits");
    }
    let a = bpsk_amplitude(params);
    let per_dim = complex_noise_var / 2.0;
    (0..n_bits)
        .map(|i| bpsk_llr(grid.symbol(i / n_data)[i % n_data], a, per_dim))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::{bpsk_modulate, mfsk_modulate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn four_ary_example() {
        let g = GrayMapping::new(4).unwrap();
        // |r|^2 = [4, 1, 0.25, 0.25]
        let r = [c(2.0), c(1.0), Complex64::new(0.0, 0.5), c(-0.5)];
        let l = mfsk_llr(SubsetObservation::new(&r, 4).unwrap(), &g).unwrap();
        assert_eq!(l, vec![-3.75, -3.0]);
    }

    #[test]
    fn equal_magnitudes_give_zero() {
        let g = GrayMapping::new(16).unwrap();
        let r: Vec<Complex64> = (0..16).map(|i| Complex64::from_polar(0.7, i as f64)).collect();
        let l = mfsk_llr(SubsetObservation::new(&r, 16).unwrap(), &g).unwrap();
        assert!(l.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn metric_is_homogeneous_of_degree_two() {
        let g = GrayMapping::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let base = mfsk_llr(SubsetObservation::new(&r, 8).unwrap(), &g).unwrap();
        for scale in [-3.0, 0.5, 7.0] {
            let rs: Vec<Complex64> = r.iter().map(|x| x * scale).collect();
            let l = mfsk_llr(SubsetObservation::new(&rs, 8).unwrap(), &g).unwrap();
            for (a, b) in l.iter().zip(&base) {
                assert!((a - scale * scale * b).abs() < 1e-9);
                assert_eq!(a.signum(), b.signum());
            }
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = GrayMapping::new(4).unwrap();
        let r = [c(1.0); 3];
        assert!(SubsetObservation::new(&r, 4).is_err());
        let obs = SubsetObservation::new(&r, 3).unwrap();
        assert!(mfsk_llr(obs, &g).is_err());
    }

    #[test]
    fn bpsk_llr_basics() {
        assert!(bpsk_llr(c(1.0), 1.0, 1e-3).unwrap() > 100.0);
        assert_eq!(bpsk_llr(c(0.0), 1.0, 0.5).unwrap(), 0.0);
        assert!(bpsk_llr(c(1.0), 1.0, 0.0).is_err());
        assert!(bpsk_llr(c(1.0), 1.0, -1.0).is_err());
        assert!(bpsk_llr(c(-0.2), 1.0, 0.5).unwrap() < bpsk_llr(c(0.1), 1.0, 0.5).unwrap());
    }

    #[test]
    fn bpsk_signs_match_minimum_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = 0.0625;
        for _ in 0..10_000 {
            let r = Complex64::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2));
            let l = bpsk_llr(r, a, 0.01).unwrap();
            let nearest_zero = (r - c(a)).norm() < (r - c(-a)).norm();
            assert_eq!(l > 0.0, nearest_zero);
        }
    }

    #[test]
    fn noiseless_grids_demap_to_the_bits() {
        let p = OfdmParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let bits: Vec<u8> = (0..408).map(|_| rng.random_range(0..2)).collect();
        for m in [2u32, 4, 8, 16, 64, 256] {
            let mcs = McsId::Mfsk(m);
            let g = mfsk_modulate(&bits, mcs, &p, &mut rng).unwrap();
            let l = mfsk_demap(&g, mcs, &p, 408, 1.0).unwrap();
            let hard: Vec<u8> = l.iter().map(|&x| u8::from(x < 0.0)).collect();
            assert_eq!(hard, bits, "M={m}");
        }
        let g = bpsk_modulate(&bits, &p).unwrap();
        let l = bpsk_demap(&g, &p, 408, 0.1).unwrap();
        let hard: Vec<u8> = l.iter().map(|&x| u8::from(x < 0.0)).collect();
        assert_eq!(hard, bits);
    }

    // Hard decisions from the per-bit metrics must reassemble the label of
    // argmax |r_i|^2, the ML non-coherent decision for equiprobable tones.
    #[test]
    fn hard_decisions_equal_ml_detection() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for m in [2usize, 4, 8, 16, 64, 256] {
            let g = GrayMapping::new(m).unwrap();
            for _ in 0..2_000 {
                let active = rng.random_range(0..m);
                let r: Vec<Complex64> = (0..m)
                    .map(|i| {
                        let n = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                        if i == active { n + Complex64::from_polar(2.0, rng.random::<f64>()) } else { n }
                    })
                    .collect();
                let l = mfsk_llr(SubsetObservation::new(&r, m).unwrap(), &g).unwrap();
                let ml = (0..m)
                    .max_by(|&a, &b| r[a].norm_sqr().total_cmp(&r[b].norm_sqr()))
                    .unwrap();
                let hard: Vec<u8> = l.iter().map(|&x| u8::from(x > 0.0)).collect();
                assert_eq!(hard, g.label(ml));
            }
        }
    }
}
