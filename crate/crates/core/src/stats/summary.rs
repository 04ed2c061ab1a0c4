use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Linear-interpolation quantile of an already sorted slice.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample("median of an empty sample"));
    }
    Ok(quantile(&sorted(values), 0.5))
}

/// Medians of both samples and their absolute difference.
pub fn median_and_amd(a: &[f64], b: &[f64]) -> Result<(f64, f64, f64)> {
    let (ma, mb) = (median(a)?, median(b)?);
    Ok((ma, mb, (ma - mb).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub fn five_number_summary(values: &[f64]) -> Result<FiveNumber> {
    if values.is_empty() {
        return Err(Error::EmptySample("summary of an empty sample"));
    }
    let s = sorted(values);
    Ok(FiveNumber {
        min: s[0],
        q1: quantile(&s, 0.25),
        median: quantile(&s, 0.5),
        q3: quantile(&s, 0.75),
        max: s[s.len() - 1],
    })
}

/// `***` below 0.01, `**` below 0.05, `*` below 0.10.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.10 {
        "*"
    } else {
        ""
    }
}
