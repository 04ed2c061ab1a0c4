use statrs::distribution::{ContinuousCDF, StudentsT};

use super::TestResult;
use crate::{Error, Result};

/// Paired two-sided t-test on x - y. The effect size is Cohen's d of the
/// differences.
pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() {
        return Err(Error::Validation(format!(
            "paired t-test needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Degenerate("paired t-test needs at least two pairs"));
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if sd <= 1e-12 * mean.abs().max(1.0) {
        return Err(Error::Degenerate("differences have zero variance"));
    }
    let t = mean / (sd / (n as f64).sqrt());
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive degrees of freedom");
    let p_value = (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0);
    Ok(TestResult {
        statistic: t,
        p_value,
        effect_size: mean / sd,
        ci_low: None,
        ci_high: None,
        n1: n,
        n2: n,
    })
}
