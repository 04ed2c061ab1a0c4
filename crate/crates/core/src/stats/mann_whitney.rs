use statrs::distribution::{ContinuousCDF, Normal};

use super::TestResult;
use crate::{Error, Result};

/// Largest n1*n2 for which the exact null distribution is enumerated.
pub const EXACT_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MwuMethod {
    /// Normal approximation with tie and continuity corrections.
    #[default]
    Normal,
    /// Exact null distribution over all splits of the pooled midranks.
    Exact,
}

/// 1-based ranks with ties sharing their mean rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn tie_term(ranks: &[f64]) -> f64 {
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        sum += t * t * t - t;
        i = j;
    }
    sum
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult> {
    mann_whitney_u_with(a, b, MwuMethod::Normal)
}

/// U = min(U1, U2) with two-sided p. The effect size is the rank-biserial
/// correlation oriented so that positive means `a` tends to exceed `b`; its
/// magnitude is 1 - 2U/(n1 n2).
pub fn mann_whitney_u_with(a: &[f64], b: &[f64], method: MwuMethod) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample("Mann-Whitney U needs two non-empty samples"));
    }
    let (n1, n2) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let nn = (n1 * n2) as f64;
    // U1 counts pairs with a below b (ties half); U2 the reverse
    let u1 = nn + (n1 * (n1 + 1)) as f64 / 2.0 - r1;
    let u2 = nn - u1;
    let u = u1.min(u2);
    let effect_size = (u2 - u1) / nn;

    let n = (n1 + n2) as f64;
    let ties = tie_term(&ranks);
    let variance = nn / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if variance <= 0.0 {
        return Ok(TestResult {
            statistic: u,
            p_value: 1.0,
            effect_size: 0.0,
            ci_low: None,
            ci_high: None,
            n1,
            n2,
        });
    }

    let p_value = match method {
        MwuMethod::Normal => {
            let z = ((u1 - nn / 2.0).abs() - 0.5).max(0.0) / variance.sqrt();
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            (2.0 * normal.sf(z)).clamp(0.0, 1.0)
        }
        MwuMethod::Exact => {
            if n1 * n2 > EXACT_LIMIT {
                return Err(Error::InvalidConfig(format!(
                    "exact Mann-Whitney p needs n1*n2 <= {EXACT_LIMIT}, got {}",
                    n1 * n2
                )));
            }
            exact_p(&ranks, n1)
        }
    };

    Ok(TestResult {
        statistic: u,
        p_value,
        effect_size,
        ci_low: None,
        ci_high: None,
        n1,
        n2,
    })
}

/// Two-sided exact p: share of all n1-subsets of the pooled ranks whose rank
/// sum lies at least as far from its mean as the observed one.
fn exact_p(ranks: &[f64], n1: usize) -> f64 {
    // doubled midranks are integers
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    let k = n1;
    // ways[j][s]: subsets of size j with doubled sum s
    let mut ways = vec![vec![0.0f64; max_sum + 1]; k + 1];
    ways[0][0] = 1.0;
    for &d in &doubled {
        for j in (1..=k).rev() {
            let (lower, upper) = ways.split_at_mut(j);
            let (prev, cur) = (&lower[j - 1], &mut upper[0]);
            for s in (d..=max_sum).rev() {
                if prev[s - d] != 0.0 {
                    cur[s] += prev[s - d];
                }
            }
        }
    }
    let observed: usize = doubled[..n1].iter().sum();
    let mean = max_sum as f64 * n1 as f64 / ranks.len() as f64;
    let distance = (observed as f64 - mean).abs();
    let total: f64 = ways[k].iter().sum();
    let extreme: f64 = ways[k]
        .iter()
        .enumerate()
        .filter(|(s, _)| (*s as f64 - mean).abs() >= distance - 1e-9)
        .map(|(_, w)| w)
        .sum();
    (extreme / total).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_share_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn separated_samples() {
        let r = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.effect_size, -1.0);
        let r = mann_whitney_u(&[3.0, 4.0], &[1.0, 2.0]).unwrap();
        assert_eq!(r.effect_size, 1.0);
    }

    #[test]
    fn single_tie() {
        let r = mann_whitney_u(&[1.0], &[1.0]).unwrap();
        assert_eq!(r.statistic, 0.5);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.effect_size, 0.0);
    }

    #[test]
    fn all_identical() {
        let r = mann_whitney_u(&[5.0; 4], &[5.0; 7]).unwrap();
        assert_eq!((r.p_value, r.effect_size), (1.0, 0.0));
    }

    #[test]
    fn normal_p_against_hand_computation() {
        // a=[1,2,3], b=[4,5,6]: U1=9, mu=4.5, sigma^2=9*7/12=5.25
        // z=(4.5-0.5)/sqrt(5.25)=1.745743, p=2*(1-Phi(z))=0.080856
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((r.p_value - 0.080856).abs() < 1e-5, "{}", r.p_value);
    }

    #[test]
    fn exact_p_small_case() {
        // only 2 of the C(6,3)=20 splits are this extreme
        let r = mann_whitney_u_with(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], MwuMethod::Exact).unwrap();
        assert!((r.p_value - 0.1).abs() < 1e-12);
        let r = mann_whitney_u_with(&[1.0, 4.0], &[2.0, 3.0], MwuMethod::Exact).unwrap();
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_limit_enforced() {
        let a = vec![1.0; 21];
        let b = vec![2.0; 20];
        assert!(mann_whitney_u_with(&a, &b, MwuMethod::Exact).is_err());
    }

    #[test]
    fn empty_sample_is_error() {
        assert!(mann_whitney_u(&[], &[1.0]).is_err());
    }

    #[test]
    fn symmetric_u_and_p() {
        let a = [3.0, 7.0, 7.0, 10.0, 12.0];
        let b = [1.0, 7.0, 8.0, 9.0];
        let ab = mann_whitney_u(&a, &b).unwrap();
        let ba = mann_whitney_u(&b, &a).unwrap();
        assert_eq!(ab.statistic, ba.statistic);
        assert!((ab.p_value - ba.p_value).abs() < 1e-15);
        assert_eq!(ab.effect_size, -ba.effect_size);
    }
}
