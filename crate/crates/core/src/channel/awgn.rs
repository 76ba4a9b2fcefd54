use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};

/// Adds circularly-symmetric complex Gaussian noise of total variance
/// `noise_variance` (half per real dimension) in place.
pub fn add_awgn<R: Rng + ?Sized>(samples: &mut [Complex64], noise_variance: f64, rng: &mut R) -> Result<()> {
    if !(noise_variance >= 0.0) || !noise_variance.is_finite() {
        return invalid(format!("noise variance {noise_variance} must be finite and >= 0"));
    }
    if noise_variance == 0.0 {
        return Ok(());
    }
    let sigma = (noise_variance / 2.0).sqrt();
    for x in samples {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *x += Complex64::new(sigma * re, sigma * im);
    }
    Ok(())
}

/// Returns a noisy copy of `samples`.
pub fn awgn<R: Rng + ?Sized>(samples: &[Complex64], noise_variance: f64, rng: &mut R) -> Result<Vec<Complex64>> {
    let mut out = samples.to_vec();
    add_awgn(&mut out, noise_variance, rng)?;
    Ok(out)
}
