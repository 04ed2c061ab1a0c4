use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const BIN_COUNT: usize = 20;
const BIN_WIDTH: f64 = 5.0;
/// Added to every bin before renormalising, so empty bins stay finite.
pub const KL_EPSILON: f64 = 1e-9;

/// Histogram over [0, 100] with 20 equal bins; the last bin is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedDistribution {
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub n: usize,
}

fn bin_index(v: f64) -> usize {
    ((v / BIN_WIDTH).floor() as usize).min(BIN_COUNT - 1)
}

pub fn bin_distribution(values: &[f64]) -> Result<BinnedDistribution> {
    if values.is_empty() {
        return Err(Error::EmptySample("cannot bin an empty sample"));
    }
    let mut counts = [0usize; BIN_COUNT];
    for (index, &value) in values.iter().enumerate() {
        if !(0.0..=100.0).contains(&value) {
            return Err(Error::OutOfRange { index, value });
        }
        counts[bin_index(value)] += 1;
    }
    let n = values.len();
    Ok(BinnedDistribution {
        bin_edges: (0..=BIN_COUNT).map(|i| i as f64 * BIN_WIDTH).collect(),
        masses: counts.iter().map(|&c| c as f64 / n as f64).collect(),
        n,
    })
}

fn smooth(masses: &[f64]) -> Vec<f64> {
    let total: f64 = masses.iter().map(|m| m + KL_EPSILON).sum();
    masses.iter().map(|m| (m + KL_EPSILON) / total).collect()
}

/// KL(p || q) in nats over arbitrary aligned mass vectors, after smoothing.
pub fn kl_divergence_masses(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "mass vectors must align");
    let (p, q) = (smooth(p), smooth(q));
    let kl: f64 = p.iter().zip(&q).map(|(pi, qi)| pi * (pi / qi).ln()).sum();
    // rounding can leave a tiny negative residue for equal inputs
    kl.max(0.0)
}

/// KL(p || q) in nats: the information lost when q stands in for p.
pub fn kl_divergence(p: &BinnedDistribution, q: &BinnedDistribution) -> f64 {
    kl_divergence_masses(&p.masses, &q.masses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bin() {
        let d = bin_distribution(&[50.0, 50.0, 50.0]).unwrap();
        assert_eq!(d.masses[10], 1.0);
        assert_eq!(d.bin_edges.len(), 21);
        assert_eq!(d.bin_edges[20], 100.0);
    }

    #[test]
    fn closed_last_bin() {
        let d = bin_distribution(&[100.0]).unwrap();
        assert_eq!(d.masses[19], 1.0);
        let d = bin_distribution(&[95.0, 99.99]).unwrap();
        assert_eq!(d.masses[19], 1.0);
    }

    #[test]
    fn half_open_edges() {
        let d = bin_distribution(&[0.0, 5.0, 10.0]).unwrap();
        for i in 0..3 {
            assert!((d.masses[i] - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!((d.masses.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_range() {
        match bin_distribution(&[10.0, 100.5]) {
            Err(Error::OutOfRange { index, value }) => {
                assert_eq!(index, 1);
                assert_eq!(value, 100.5);
            }
            other => panic!("{other:?}"),
        }
        assert!(bin_distribution(&[-1.0]).is_err());
        assert!(bin_distribution(&[]).is_err());
    }

    #[test]
    fn kl_identity_and_closed_form() {
        let p = bin_distribution(&[10.0, 20.0, 20.0, 90.0]).unwrap();
        assert!(kl_divergence(&p, &p).abs() < 1e-9);
        let two = kl_divergence_masses(&[1.0, 0.0], &[0.5, 0.5]);
        assert!((two - std::f64::consts::LN_2).abs() < 1e-3);
    }

    #[test]
    fn kl_is_asymmetric() {
        let p = bin_distribution(&[10.0, 12.0, 50.0]).unwrap();
        let q = bin_distribution(&[50.0, 52.0, 90.0, 91.0]).unwrap();
        assert!((kl_divergence(&p, &q) - kl_divergence(&q, &p)).abs() > 1e-3);
    }
}
