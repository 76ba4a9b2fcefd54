use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::add_awgn;
use crate::error::{invalid, Result};
use crate::fec::{DecoderScratch, Interleaver, LdpcCode, DEFAULT_INTERLEAVER_SEED};
use crate::modem::{
    bpsk_demap, mfsk_demap, modulate, noise_variance_for_snr, Grid, McsId, OfdmEngine, OfdmParams,
};

/// Where the receiver noise is added.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseDomain {
    /// Directly on the subcarrier grid. With a unitary FFT this is
    /// statistically identical to time-domain AWGN and much cheaper.
    #[default]
    Frequency,
    /// On the cyclic-prefixed time samples, followed by the OFDM receiver.
    Time,
}

/// Scaling from the max-log MFSK metric to decoder LLRs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MfskScaling {
    /// `factor / sigma^2`.
    InverseNoise(f64),
    /// Square-law weighting at low per-tone SNR, `2 / sigma^2` once the
    /// envelope detector is in its linear regime: `min(a^2/sigma^4, 2/sigma^2)`.
    Matched,
}

impl Default for MfskScaling {
    fn default() -> Self {
        MfskScaling::Matched
    }
}

impl MfskScaling {
    /// LLR scale for a tone of power `tone_power` in complex noise of
    /// variance `noise_var`.
    pub fn scale(&self, tone_power: f64, noise_var: f64) -> f64 {
        match *self {
            MfskScaling::InverseNoise(f) => f / noise_var,
            MfskScaling::Matched => (tone_power / noise_var).min(2.0) / noise_var,
        }
    }
}

/// The coded transmit/receive chain for one MCS.
#[derive(Debug, Clone)]
pub struct LinkChain {
    pub mcs: McsId,
    pub params: OfdmParams,
    pub code: LdpcCode,
    pub interleaver: Interleaver,
    pub noise_domain: NoiseDomain,
    pub mfsk_scaling: MfskScaling,
}

/// Per-worker buffers.
pub struct ChainScratch {
    decoder: DecoderScratch,
    engine: Option<OfdmEngine>,
    message: Vec<u8>,
}

impl LinkChain {
    /// Standard 408/204 code, default interleaver, 256-point OFDM.
    pub fn new(mcs: McsId) -> Result<Self> {
        let code = LdpcCode::standard().clone();
        let interleaver = Interleaver::new(code.n(), DEFAULT_INTERLEAVER_SEED);
        Self::with_parts(mcs, OfdmParams::default(), code, interleaver)
    }

    pub fn with_parts(
        mcs: McsId,
        params: OfdmParams,
        code: LdpcCode,
        interleaver: Interleaver,
    ) -> Result<Self> {
        params.validate()?;
        crate::modem::bits_per_ofdm_symbol(mcs, &params)?;
        if interleaver.len() != code.n() {
            return invalid(format!(
                "interleaver length {} differs from code length {}",
                interleaver.len(),
                code.n()
            ));
        }
        Ok(Self {
            mcs,
            params,
            code,
            interleaver,
            noise_domain: NoiseDomain::default(),
            mfsk_scaling: MfskScaling::default(),
        })
    }

    pub fn with_noise_domain(mut self, domain: NoiseDomain) -> Self {
        self.noise_domain = domain;
        self
    }

    pub fn with_mfsk_scaling(mut self, scaling: MfskScaling) -> Self {
        self.mfsk_scaling = scaling;
        self
    }

    pub fn scratch(&self) -> Result<ChainScratch> {
        let engine = match self.noise_domain {
            NoiseDomain::Frequency => None,
            NoiseDomain::Time => Some(OfdmEngine::new(self.params)?),
        };
        Ok(ChainScratch {
            decoder: DecoderScratch::new(),
            engine,
            message: Vec::with_capacity(self.code.k()),
        })
    }

    /// Sends one random message through the chain at complex noise
    /// variance `noise_var` per subcarrier (`None` for a noiseless channel)
    /// and reports whether it was decoded in error.
    pub fn packet_error<R: Rng + ?Sized>(
        &self,
        noise_var: Option<f64>,
        rng: &mut R,
        s: &mut ChainScratch,
    ) -> Result<bool> {
        let k = self.code.k();
        s.message.clear();
        s.message.extend((0..k).map(|_| rng.random_range(0..2u8)));
        let codeword = self.code.encode(&s.message)?;
        let tx_bits = self.interleaver.interleave(&codeword)?;
        let mut grid = modulate(&tx_bits, self.mcs, &self.params, rng)?;

        match (self.noise_domain, s.engine.as_mut()) {
            (NoiseDomain::Time, Some(engine)) => {
                let mut samples = engine.frame(&grid)?;
                if let Some(var) = noise_var {
                    add_awgn(&mut samples, var, rng)?;
                }
                grid = engine.deframe(&samples)?;
            }
            _ => {
                if let Some(var) = noise_var {
                    add_awgn(grid.as_mut_slice(), var, rng)?;
                }
            }
        }

        let llrs = self.demap(&grid, tx_bits.len(), noise_var)?;
        let llrs = self.interleaver.deinterleave(&llrs)?;
        let out = self.code.decode_with(&llrs, &mut s.decoder)?;
        Ok(out.message != s.message)
    }

    fn demap(&self, grid: &Grid, n_bits: usize, noise_var: Option<f64>) -> Result<Vec<f64>> {
        // a noiseless channel still needs a finite LLR magnitude
        let var = noise_var.unwrap_or(1e-6);
        match self.mcs {
            McsId::Bpsk => bpsk_demap(grid, &self.params, n_bits, var),
            McsId::Mfsk(m) => {
                let tone = self.params.power_norm * f64::from(m) / self.params.n_data_subcarriers as f64;
                let scale = self.mfsk_scaling.scale(tone, var);
                mfsk_demap(grid, self.mcs, &self.params, n_bits, scale)
            }
        }
    }

    /// Complex noise variance per subcarrier at `snr_db`.
    pub fn noise_variance(&self, snr_db: f64) -> Result<f64> {
        noise_variance_for_snr(snr_db, &self.params)
    }
}
