use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::LinkChain;
use crate::error::{invalid, Error, Result};
use crate::rng;

/// Monte-Carlo stopping rule: stop once `min_errors` packet errors have
/// been seen or `max_packets` packets have been sent, whichever is first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_packets: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_packets: 10_000_000,
        }
    }
}

impl StopRule {
    pub fn new(min_errors: u64, max_packets: u64) -> Result<Self> {
        if min_errors == 0 || max_packets == 0 {
            return invalid("stopping rule needs min_errors > 0 and max_packets > 0");
        }
        Ok(Self {
            min_errors,
            max_packets,
        })
    }

    /// Exactly `packets` packets, regardless of errors.
    pub fn fixed(packets: u64) -> Self {
        Self {
            min_errors: u64::MAX,
            max_packets: packets,
        }
    }
}

/// One point of a PER curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerPoint {
    pub snr_db: f64,
    pub packets: u64,
    pub errors: u64,
    pub per: f64,
    /// Half-width of the normal-approximation 95% confidence interval.
    pub ci95: f64,
}

impl PerPoint {
    pub fn new(snr_db: f64, packets: u64, errors: u64) -> Result<Self> {
        if packets == 0 || errors > packets {
            return invalid(format!("{errors} errors in {packets} packets"));
        }
        let n = packets as f64;
        let per = errors as f64 / n;
        Ok(Self {
            snr_db,
            packets,
            errors,
            per,
            ci95: 1.96 * (per * (1.0 - per) / n).sqrt(),
        })
    }

    pub fn ci_low(&self) -> f64 {
        (self.per - self.ci95).max(0.0)
    }

    pub fn ci_high(&self) -> f64 {
        (self.per + self.ci95).min(1.0)
    }

    /// Whether the two 95% intervals intersect.
    pub fn overlaps(&self, other: &PerPoint) -> bool {
        self.ci_low() <= other.ci_high() && other.ci_low() <= self.ci_high()
    }
}

const FIRST_BATCH: u64 = 32;
const MAX_BATCH: u64 = 4096;

/// Runs packets `0, 1, 2, ...` until the stopping rule fires. Packet `i`
/// draws from its own stream keyed by `tags` and `i`, so the outcome does
/// not depend on the thread count.
fn count_errors(
    chain: &LinkChain,
    noise_var: Option<f64>,
    stop: StopRule,
    seed: u64,
    tags: [u64; 2],
) -> Result<(u64, u64)> {
    let mut packets = 0u64;
    let mut errors = 0u64;
    let mut batch = FIRST_BATCH;
    while packets < stop.max_packets && errors < stop.min_errors {
        let end = (packets + batch).min(stop.max_packets);
        let outcomes: Vec<bool> = (packets..end)
            .into_par_iter()
            .map_init(
                || chain.scratch(),
                |scratch, i| {
                    let scratch = scratch.as_mut().map_err(|e| Error::InvalidArgument(e.to_string()))?;
                    let mut r = rng::stream(seed, &[tags[0], tags[1], i]);
                    chain.packet_error(noise_var, &mut r, scratch)
                },
            )
            .collect::<Result<_>>()?;
        for failed in outcomes {
            packets += 1;
            errors += u64::from(failed);
            if errors >= stop.min_errors {
                break;
            }
        }
        batch = (batch * 2).min(MAX_BATCH);
    }
    Ok((packets, errors))
}

/// PER of `chain` at `snr_db`.
pub fn run_per_point(chain: &LinkChain, snr_db: f64, stop: StopRule, seed: u64) -> Result<PerPoint> {
    if !snr_db.is_finite() {
        return invalid(format!("SNR {snr_db} dB is not finite"));
    }
    let var = chain.noise_variance(snr_db)?;
    let (packets, errors) = count_errors(chain, Some(var), stop, seed, [chain.mcs.tag(), snr_db.to_bits()])?;
    PerPoint::new(snr_db, packets, errors)
}

/// PER with no noise at all (reported at `snr_db = +inf`).
pub fn run_noiseless(chain: &LinkChain, packets: u64, seed: u64) -> Result<PerPoint> {
    let (n, e) = count_errors(chain, None, StopRule::fixed(packets), seed, [chain.mcs.tag(), u64::MAX])?;
    PerPoint::new(f64::INFINITY, n, e)
}

/// One [`PerPoint`] per grid value.
pub fn per_curve(chain: &LinkChain, snr_grid: &[f64], stop: StopRule, seed: u64) -> Result<Vec<PerPoint>> {
    if snr_grid.is_empty() {
        return invalid("empty SNR grid");
    }
    if snr_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("SNR grid must be strictly increasing");
    }
    snr_grid
        .iter()
        .map(|&s| run_per_point(chain, s, stop, seed))
        .collect()
}

/// PER used on a log scale: a point without errors counts as half an
/// error so that it still has a finite logarithm.
fn log_per(p: &PerPoint) -> f64 {
    if p.errors == 0 {
        (0.5 / p.packets as f64).log10()
    } else {
        p.per.log10()
    }
}

/// SNR at which the curve first falls to `target_per`, interpolating
/// `log10(PER)` linearly between the bracketing points.
pub fn extract_threshold(curve: &[PerPoint], target_per: f64) -> Result<f64> {
    if !(target_per > 0.0 && target_per < 1.0) {
        return invalid(format!("target PER {target_per} outside (0, 1)"));
    }
    if curve.is_empty() {
        return invalid("empty PER curve");
    }
    for (i, p) in curve.iter().enumerate() {
        if p.per == target_per {
            return Ok(p.snr_db);
        }
        if let Some(q) = curve.get(i + 1) {
            if p.per > target_per && q.per < target_per {
                let (a, b) = (log_per(p), log_per(q));
                let t = (a - target_per.log10()) / (a - b);
                return Ok(p.snr_db + t * (q.snr_db - p.snr_db));
            }
        }
    }
    let (min, max) = curve
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.per), hi.max(p.per)));
    Err(Error::NotBracketed {
        target: target_per,
        min,
        max,
    })
}

/// Grid used by [`find_threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    pub target_per: f64,
    /// First SNR of the coarse sweep.
    pub start_db: f64,
    /// Give up above this SNR.
    pub stop_db: f64,
    pub coarse_step_db: f64,
    pub fine_step_db: f64,
    /// The coarse sweep stops at the first PER below this value.
    pub coarse_per: f64,
    /// Stopping rule of the coarse sweep.
    pub coarse_stop: StopRule,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self {
            target_per: 1e-3,
            start_db: -25.0,
            stop_db: 30.0,
            coarse_step_db: 1.0,
            fine_step_db: 0.25,
            coarse_per: 0.1,
            coarse_stop: StopRule {
                min_errors: 20,
                max_packets: 2000,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub gamma0_db: f64,
    pub coarse: Vec<PerPoint>,
    pub fine: Vec<PerPoint>,
}

/// Locates the waterfall with a cheap coarse sweep, then walks a fine grid
/// from one coarse step below it with the full stopping rule until the
/// PER falls below the target.
pub fn find_threshold(
    chain: &LinkChain,
    search: &ThresholdSearch,
    stop: StopRule,
    seed: u64,
) -> Result<ThresholdResult> {
    if !(search.coarse_step_db > 0.0 && search.fine_step_db > 0.0 && search.stop_db > search.start_db) {
        return invalid("threshold search needs positive steps and start < stop");
    }
    let mut coarse = Vec::new();
    let mut knee = None;
    for i in 0.. {
        let snr = search.start_db + i as f64 * search.coarse_step_db;
        if snr > search.stop_db {
            break;
        }
        let p = run_per_point(chain, snr, search.coarse_stop, seed)?;
        coarse.push(p);
        if p.per < search.coarse_per {
            knee = Some(snr);
            break;
        }
    }
    let Some(knee) = knee else {
        return Err(Error::NotBracketed {
            target: search.target_per,
            min: coarse.last().map_or(1.0, |p| p.per),
            max: 1.0,
        });
    };

    let mut fine_start = knee - search.coarse_step_db;
    let mut fine = Vec::new();
    loop {
        let mut i = 0;
        fine.clear();
        loop {
            let snr = fine_start + i as f64 * search.fine_step_db;
            if snr > search.stop_db {
                break;
            }
            let p = run_per_point(chain, snr, stop, seed)?;
            fine.push(p);
            if p.per < search.target_per {
                break;
            }
            i += 1;
        }
        // the first fine point has to sit above the target
        if fine.len() == 1 && fine[0].per < search.target_per && fine_start > search.start_db {
            fine_start -= search.coarse_step_db;
            continue;
        }
        break;
    }
    let gamma0_db = extract_threshold(&fine, search.target_per)?;
    Ok(ThresholdResult {
        gamma0_db,
        coarse,
        fine,
    })
}
