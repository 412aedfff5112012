use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Asymptotic 1% critical coefficient of the two-sample KS statistic.
const KS_C_01: f64 = 1.6276236115189;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    /// `c(0.01) sqrt((n + m) / (n m))`.
    pub critical_1pct: f64,
    pub n: usize,
    pub m: usize,
}

impl KsTest {
    pub fn rejects(&self) -> bool {
        self.statistic > self.critical_1pct
    }
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`. Sorts both
/// inputs in place.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> Result<KsTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] <= v {
            i += 1;
        }
        while j < m && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let (nf, mf) = (n as f64, m as f64);
    Ok(KsTest {
        statistic: d,
        critical_1pct: KS_C_01 * ((nf + mf) / (nf * mf)).sqrt(),
        n,
        m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples() {
        let mut a = vec![3.0, 1.0, 2.0];
        let mut b = a.clone();
        assert_eq!(ks_two_sample(&mut a, &mut b).unwrap().statistic, 0.0);
    }

    #[test]
    fn disjoint_samples() {
        let mut a = vec![0.0, 0.1, 0.2];
        let mut b = vec![1.0, 1.1];
        let r = ks_two_sample(&mut a, &mut b).unwrap();
        assert_eq!(r.statistic, 1.0);
        let mut a: Vec<f64> = (0..50).map(f64::from).collect();
        let mut b: Vec<f64> = (100..150).map(f64::from).collect();
        assert!(ks_two_sample(&mut a, &mut b).unwrap().rejects());
    }

    #[test]
    fn ties_handled() {
        let mut a = vec![0.0, 0.0, 1.0, 1.0];
        let mut b = vec![0.0, 1.0];
        assert_eq!(ks_two_sample(&mut a, &mut b).unwrap().statistic, 0.0);
        assert!(ks_two_sample(&mut [], &mut b).is_err());
    }
}
