use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::mann_whitney::midranks;
use super::summary::quantile;
use crate::{Error, Result};

pub const DEFAULT_RESAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub level: f64,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            level: 0.95,
            resamples: DEFAULT_RESAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

fn oriented_rbc(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let r1: f64 = ranks[..a.len()].iter().sum();
    let u_gt = r1 - n1 * (n1 + 1.0) / 2.0;
    // an all-tied resample lands exactly on 0
    2.0 * u_gt / (n1 * n2) - 1.0
}

/// Percentile bootstrap interval for the oriented rank-biserial correlation.
/// Each resample draws from its own ChaCha stream, so the result does not
/// depend on the thread count.
pub fn rank_biserial_ci(a: &[f64], b: &[f64], config: BootstrapConfig) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample("bootstrap needs two non-empty samples"));
    }
    if !(0.0 < config.level && config.level < 1.0) || config.resamples == 0 {
        return Err(Error::InvalidConfig(format!(
            "bootstrap needs 0 < level < 1 and at least one resample, got {config:?}"
        )));
    }
    let mut stats: Vec<f64> = (0..config.resamples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let ra: Vec<f64> = (0..a.len()).map(|_| a[rng.random_range(0..a.len())]).collect();
            let rb: Vec<f64> = (0..b.len()).map(|_| b[rng.random_range(0..b.len())]).collect();
            oriented_rbc(&ra, &rb)
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let tail = (1.0 - config.level) / 2.0;
    Ok((quantile(&stats, tail), quantile(&stats, 1.0 - tail)))
}
