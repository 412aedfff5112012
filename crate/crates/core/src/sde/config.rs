use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Parameters of one Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub d: usize,
    pub t_end: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub store_full_paths: bool,
}

impl SimConfig {
    pub fn new(d: usize, t_end: f64, dt: f64, n_paths: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            d,
            t_end,
            dt,
            n_paths,
            seed,
            store_full_paths: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_full_paths(mut self, store: bool) -> Self {
        self.store_full_paths = store;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.dt > 0.0) || self.dt > self.t_end {
            return Err(invalid(format!(
                "dt must lie in (0, t_end], got {} with t_end {}",
                self.dt, self.t_end
            )));
        }
        if self.n_paths == 0 {
            return Err(invalid("n_paths must be at least 1"));
        }
        Ok(())
    }

    /// Number of Euler steps; the last one is shortened when `t_end` is not
    /// a multiple of `dt`.
    pub fn n_steps(&self) -> usize {
        ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize
    }

    /// Length of step `k` (0-based).
    pub fn step_len(&self, k: usize) -> f64 {
        let n = self.n_steps();
        if k + 1 < n {
            self.dt
        } else {
            self.t_end - (n - 1) as f64 * self.dt
        }
    }

    /// `(dt, sqrt(dt), last step, sqrt(last step))`, hoisted out of the
    /// inner loops.
    pub(crate) fn step_table(&self) -> StepTable {
        let n = self.n_steps();
        let last = self.step_len(n - 1);
        StepTable {
            n,
            dt: self.dt,
            sqrt_dt: self.dt.sqrt(),
            last,
            sqrt_last: last.sqrt(),
        }
    }

    pub fn grid_time(&self, k: usize) -> f64 {
        if k >= self.n_steps() {
            self.t_end
        } else {
            k as f64 * self.dt
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepTable {
    pub n: usize,
    pub dt: f64,
    pub sqrt_dt: f64,
    pub last: f64,
    pub sqrt_last: f64,
}

impl StepTable {
    /// `(h, sqrt(h))` of step `k`.
    #[inline]
    pub fn step(&self, k: usize) -> (f64, f64) {
        if k + 1 < self.n {
            (self.dt, self.sqrt_dt)
        } else {
            (self.last, self.sqrt_last)
        }
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_cover_horizon() {
        let c = SimConfig::new(1, 1.0, 1e-3, 10, 0).unwrap();
        assert_eq!(c.n_steps(), 1000);
        let total: f64 = (0..c.n_steps()).map(|k| c.step_len(k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let c = SimConfig::new(1, 1.0, 0.3, 10, 0).unwrap();
        assert_eq!(c.n_steps(), 4);
        assert!((c.step_len(3) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(SimConfig::new(0, 1.0, 0.1, 1, 0).is_err());
        assert!(SimConfig::new(1, 1.0, 2.0, 1, 0).is_err());
        assert!(SimConfig::new(1, 1.0, 0.1, 0, 0).is_err());
        assert!(SimConfig::new(1, -1.0, 0.1, 1, 0).is_err());
    }
}
