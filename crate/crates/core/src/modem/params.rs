use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Subset sizes supported for MFSK.
pub const MFSK_ORDERS: [u32; 6] = [2, 4, 8, 16, 64, 256];

/// OFDM numerology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmParams {
    pub n_fft: usize,
    pub cp_len: usize,
    /// Data subcarriers occupy bins `0..n_data_subcarriers`.
    pub n_data_subcarriers: usize,
    /// Total transmit power per OFDM symbol.
    pub power_norm: f64,
}

impl Default for OfdmParams {
    fn default() -> Self {
        Self {
            n_fft: 256,
            cp_len: 32,
            n_data_subcarriers: 256,
            power_norm: 1.0,
        }
    }
}

impl OfdmParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_fft == 0 {
            return invalid("n_fft must be positive");
        }
        if self.cp_len >= self.n_fft {
            return invalid(format!("cp_len {} must be < n_fft {}", self.cp_len, self.n_fft));
        }
        if self.n_data_subcarriers == 0 || self.n_data_subcarriers > self.n_fft {
            return invalid(format!(
                "n_data_subcarriers {} must be in 1..={}",
                self.n_data_subcarriers, self.n_fft
            ));
        }
        if !(self.power_norm.is_finite() && self.power_norm > 0.0) {
            return invalid("power_norm must be positive and finite");
        }
        Ok(())
    }

    /// Time-domain samples per OFDM symbol including the cyclic prefix.
    pub fn symbol_len(&self) -> usize {
        self.n_fft + self.cp_len
    }
}

/// Modulation-and-coding scheme. All schemes use the rate-1/2 LDPC code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum McsId {
    Bpsk,
    Mfsk(u32),
}

impl McsId {
    pub fn mfsk(m: u32) -> Result<Self> {
        if MFSK_ORDERS.contains(&m) {
            Ok(McsId::Mfsk(m))
        } else {
            invalid(format!("MFSK order {m} not in {MFSK_ORDERS:?}"))
        }
    }

    /// All schemes: MFSK in increasing `M`, then BPSK.
    pub fn all() -> Vec<McsId> {
        MFSK_ORDERS
            .iter()
            .map(|&m| McsId::Mfsk(m))
            .chain(std::iter::once(McsId::Bpsk))
            .collect()
    }

    /// Subset size for MFSK, `None` for BPSK.
    pub fn order(&self) -> Option<u32> {
        match *self {
            McsId::Bpsk => None,
            McsId::Mfsk(m) => Some(m),
        }
    }

    /// Coded bits per modulation symbol (per MFSK subset, per BPSK subcarrier).
    pub fn bits_per_symbol(&self) -> usize {
        match *self {
            McsId::Bpsk => 1,
            McsId::Mfsk(m) => m.trailing_zeros() as usize,
        }
    }

    /// Subcarriers consumed per modulation symbol.
    pub fn subcarriers_per_symbol(&self) -> usize {
        match *self {
            McsId::Bpsk => 1,
            McsId::Mfsk(m) => m as usize,
        }
    }

    /// Bandwidth utilisation relative to BPSK: `log2(M)/M` for MFSK.
    pub fn spectral_ratio(&self) -> f64 {
        self.bits_per_symbol() as f64 / self.subcarriers_per_symbol() as f64
    }

    pub(crate) fn check(&self) -> Result<()> {
        match *self {
            McsId::Mfsk(m) if !MFSK_ORDERS.contains(&m) => {
                invalid(format!("MFSK order {m} not in {MFSK_ORDERS:?}"))
            }
            _ => Ok(()),
        }
    }

    /// Stable numeric tag used to key random streams.
    pub(crate) fn tag(&self) -> u64 {
        match *self {
            McsId::Bpsk => 1,
            McsId::Mfsk(m) => 1000 + u64::from(m),
        }
    }
}

impl fmt::Display for McsId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McsId::Bpsk => write!(f, "BPSK"),
            McsId::Mfsk(m) => write!(f, "MFSK-{m}"),
        }
    }
}

impl FromStr for McsId {
    type Err = Error;

    /// Accepts `bpsk`, `mfsk-16`, `mfsk16`, `MFSK-16` or a bare order `16`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "bpsk" {
            return Ok(McsId::Bpsk);
        }
        let digits = t.strip_prefix("mfsk").unwrap_or(&t).trim_start_matches(['-', '_']);
        match digits.parse::<u32>() {
            Ok(m) => McsId::mfsk(m),
            Err(_) => invalid(format!("unknown MCS {s:?}")),
        }
    }
}

/// Coded bits carried by one OFDM symbol.
pub fn bits_per_ofdm_symbol(mcs: McsId, params: &OfdmParams) -> Result<usize> {
    mcs.check()?;
    params.validate()?;
    let sub = mcs.subcarriers_per_symbol();
    if params.n_data_subcarriers % sub != 0 {
        return invalid(format!(
            "{mcs} subsets do not tile {} data subcarriers",
            params.n_data_subcarriers
        ));
    }
    Ok(params.n_data_subcarriers / sub * mcs.bits_per_symbol())
}

/// Complex noise variance per subcarrier that realises `snr_db` under the
/// project SNR convention (see the module docs).
pub fn noise_variance_for_snr(snr_db: f64, params: &OfdmParams) -> Result<f64> {
    let var = params.power_norm / (params.n_fft as f64 * 10f64.powf(snr_db / 10.0));
    if !var.is_finite() || var <= 0.0 {
        return invalid(format!("SNR {snr_db} dB does not map to a finite noise variance"));
    }
    Ok(var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_per_symbol_examples() {
        let p = OfdmParams::default();
        assert_eq!(bits_per_ofdm_symbol(McsId::Mfsk(4), &p).unwrap(), 128);
        assert_eq!(bits_per_ofdm_symbol(McsId::Mfsk(256), &p).unwrap(), 8);
        assert_eq!(bits_per_ofdm_symbol(McsId::Bpsk, &p).unwrap(), 256);
        assert_eq!(bits_per_ofdm_symbol(McsId::Mfsk(2), &p).unwrap(), 128);
        assert_eq!(bits_per_ofdm_symbol(McsId::Mfsk(64), &p).unwrap(), 24);
    }

    #[test]
    fn subsets_must_tile_data_subcarriers() {
        let p = OfdmParams {
            n_data_subcarriers: 200,
            ..Default::default()
        };
        assert!(bits_per_ofdm_symbol(McsId::Mfsk(16), &p).is_err());
        assert!(bits_per_ofdm_symbol(McsId::Mfsk(8), &p).is_ok());
        assert!(bits_per_ofdm_symbol(McsId::Mfsk(3), &OfdmParams::default()).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(OfdmParams::default().validate().is_ok());
        let bad_cp = OfdmParams {
            cp_len: 256,
            ..Default::default()
        };
        assert!(bad_cp.validate().is_err());
        let too_many = OfdmParams {
            n_data_subcarriers: 257,
            ..Default::default()
        };
        assert!(too_many.validate().is_err());
    }

    #[test]
    fn mcs_parsing_and_display() {
        assert_eq!("bpsk".parse::<McsId>().unwrap(), McsId::Bpsk);
        assert_eq!("MFSK-16".parse::<McsId>().unwrap(), McsId::Mfsk(16));
        assert_eq!("mfsk256".parse::<McsId>().unwrap(), McsId::Mfsk(256));
        assert_eq!("64".parse::<McsId>().unwrap(), McsId::Mfsk(64));
        assert!("mfsk32".parse::<McsId>().is_err());
        assert!("qpsk".parse::<McsId>().is_err());
        for mcs in McsId::all() {
            assert_eq!(mcs.to_string().parse::<McsId>().unwrap(), mcs);
        }
        assert_eq!(McsId::all().len(), 7);
    }

    #[test]
    fn noise_variance_convention() {
        let p = OfdmParams::default();
        let v = noise_variance_for_snr(0.0, &p).unwrap();
        assert!((v * 256.0 - 1.0).abs() < 1e-15);
        let v10 = noise_variance_for_snr(10.0, &p).unwrap();
        assert!((v / v10 - 10.0).abs() < 1e-12);
        assert!(noise_variance_for_snr(f64::NAN, &p).is_err());
        assert!(noise_variance_for_snr(f64::INFINITY, &p).is_err());
        assert!(noise_variance_for_snr(-4000.0, &p).is_err());
    }
}
