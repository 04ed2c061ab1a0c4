//! Distribution comparisons on the percentage scale.

mod binning;
mod bootstrap;
mod ks;
mod mann_whitney;
mod summary;
mod ttest;

use serde::{Deserialize, Serialize};

pub use binning::{bin_distribution, kl_divergence, kl_divergence_masses, BinnedDistribution, BIN_COUNT, KL_EPSILON};
pub use bootstrap::{rank_biserial_ci, BootstrapConfig, DEFAULT_RESAMPLES, DEFAULT_SEED};
pub use ks::ks_statistic;
pub use mann_whitney::{
    mann_whitney_u, mann_whitney_u_with, midranks, MwuMethod, EXACT_LIMIT,
};
pub use summary::{five_number_summary, median, median_and_amd, quantile, significance_stars, FiveNumber};
pub use ttest::paired_t_test;

/// Outcome of a two-sample test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Rank-biserial correlation or Cohen's d, depending on the test.
    pub effect_size: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub n1: usize,
    pub n2: usize,
}
