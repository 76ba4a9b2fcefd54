use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use super::{bits_per_ofdm_symbol, GrayMapping, Grid, McsId, OfdmParams};
use crate::error::{invalid, Result};

/// Length of `n_bits` after zero padding to a whole number of OFDM symbols.
pub fn padded_len(n_bits: usize, mcs: McsId, params: &OfdmParams) -> Result<usize> {
    let per = bits_per_ofdm_symbol(mcs, params)?;
    Ok(n_bits.div_ceil(per) * per)
}

fn check_bits(bits: &[u8]) -> Result<()> {
    if bits.is_empty() {
        return invalid("no bits to modulate");
    }
    if bits.iter().any(|&b| b > 1) {
        return invalid("bits must be 0 or 1");
    }
    Ok(())
}

/// MFSK modulation. The final OFDM symbol is completed with zero bits.
///
/// Each subset lights the subcarrier `gray_map(bits)` with power
/// `power_norm * M / n_data_subcarriers` and a uniformly random phase.
pub fn mfsk_modulate<R: Rng + ?Sized>(
    bits: &[u8],
    mcs: McsId,
    params: &OfdmParams,
    rng: &mut R,
) -> Result<Grid> {
    let Some(m) = mcs.order() else {
        return invalid("mfsk_modulate called with BPSK");
    };
    let m = m as usize;
    let per_symbol = bits_per_ofdm_symbol(mcs, params)?;
    check_bits(bits)?;
    let mapping = GrayMapping::new(m)?;
    let k = mapping.bits();
    let n_symbols = bits.len().div_ceil(per_symbol);
    let amp = (params.power_norm * m as f64 / params.n_data_subcarriers as f64).sqrt();
    let subsets = params.n_data_subcarriers / m;

    let mut grid = Grid::zeros(params.n_fft, n_symbols);
    let mut group = vec![0u8; k];
    for s in 0..n_symbols {
        let sym = grid.symbol_mut(s);
        for j in 0..subsets {
            let start = (s * subsets + j) * k;
            for (t, g) in group.iter_mut().enumerate() {
                *g = bits.get(start + t).copied().unwrap_or(0);
            }
            let idx = mapping.map_unchecked(&group);
            let phase = rng.random::<f64>() * TAU;
            sym[j * m + idx] = Complex64::from_polar(amp, phase);
        }
    }
    Ok(grid)
}

/// Coherent BPSK: bit 0 -> `+a`, bit 1 -> `-a`, `a^2 = power_norm / n_data`.
pub fn bpsk_modulate(bits: &[u8], params: &OfdmParams) -> Result<Grid> {
    params.validate()?;
    check_bits(bits)?;
    let n_data = params.n_data_subcarriers;
    let n_symbols = bits.len().div_ceil(n_data);
    let amp = bpsk_amplitude(params);
    let mut grid = Grid::zeros(params.n_fft, n_symbols);
    for s in 0..n_symbols {
        let sym = grid.symbol_mut(s);
        for (j, x) in sym[..n_data].iter_mut().enumerate() {
            let b = bits.get(s * n_data + j).copied().unwrap_or(0);
            *x = Complex64::new(if b == 0 { amp } else { -amp }, 0.0);
        }
    }
    Ok(grid)
}

pub(crate) fn bpsk_amplitude(params: &OfdmParams) -> f64 {
    (params.power_norm / params.n_data_subcarriers as f64).sqrt()
}

/// Dispatches to [`mfsk_modulate`] or [`bpsk_modulate`].
pub fn modulate<R: Rng + ?Sized>(
    bits: &[u8],
    mcs: McsId,
    params: &OfdmParams,
    rng: &mut R,
) -> Result<Grid> {
    match mcs {
        McsId::Bpsk => bpsk_modulate(bits, params),
        McsId::Mfsk(_) => mfsk_modulate(bits, mcs, params, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
        (0..n).map(|_| rng.random_range(0..2)).collect()
    }

    #[test]
    fn toy_grid_active_indices() {
        let p = OfdmParams {
            n_fft: 8,
            cp_len: 2,
            n_data_subcarriers: 8,
            power_norm: 1.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = mfsk_modulate(&[0, 0, 0, 1], McsId::Mfsk(4), &p, &mut rng).unwrap();
        assert_eq!(g.n_symbols(), 1);
        let active: Vec<usize> = (0..8).filter(|&i| g.symbol(0)[i].norm() > 0.0).collect();
        assert_eq!(active, vec![0, 5]);
        assert!((g.symbol_energy(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_active_subcarrier_per_subset_and_unit_power() {
        let p = OfdmParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for m in [2u32, 4, 8, 16, 64, 256] {
            let mcs = McsId::Mfsk(m);
            let bits = random_bits(&mut rng, 408);
            let g = mfsk_modulate(&bits, mcs, &p, &mut rng).unwrap();
            let per = bits_per_ofdm_symbol(mcs, &p).unwrap();
            assert_eq!(g.n_symbols(), 408usize.div_ceil(per));
            for s in 0..g.n_symbols() {
                let sym = g.symbol(s);
                for subset in sym.chunks(m as usize) {
                    assert_eq!(subset.iter().filter(|x| x.norm_sqr() > 0.0).count(), 1);
                }
                assert!((g.symbol_energy(s) - 1.0).abs() < 1e-12, "M={m}");
            }
        }
    }

    #[test]
    fn bpsk_levels_and_power() {
        let p = OfdmParams::default();
        let g = bpsk_modulate(&[0; 300], &p).unwrap();
        assert_eq!(g.n_symbols(), 2);
        let a = 1.0 / 16.0;
        assert!(g.symbol(0).iter().all(|x| (x.re - a).abs() < 1e-15 && x.im == 0.0));
        let mut bits = vec![0u8; 256];
        bits[3] = 1;
        let g = bpsk_modulate(&bits, &p).unwrap();
        assert!((g.symbol(0)[3].re + a).abs() < 1e-15);
        assert!((g.symbol_energy(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn padding_to_symbol_boundary() {
        let p = OfdmParams::default();
        assert_eq!(padded_len(408, McsId::Mfsk(256), &p).unwrap(), 408);
        assert_eq!(padded_len(408, McsId::Bpsk, &p).unwrap(), 512);
        assert_eq!(padded_len(408, McsId::Mfsk(4), &p).unwrap(), 512);
        assert_eq!(padded_len(408, McsId::Mfsk(64), &p).unwrap(), 408);
    }

    #[test]
    fn invalid_inputs() {
        let p = OfdmParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(mfsk_modulate(&[0, 2], McsId::Mfsk(4), &p, &mut rng).is_err());
        assert!(mfsk_modulate(&[], McsId::Mfsk(4), &p, &mut rng).is_err());
        assert!(mfsk_modulate(&[0, 1], McsId::Bpsk, &p, &mut rng).is_err());
        let odd = OfdmParams {
            n_data_subcarriers: 96,
            ..p
        };
        assert!(mfsk_modulate(&[0; 8], McsId::Mfsk(64), &odd, &mut rng).is_err());
    }
}
