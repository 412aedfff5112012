use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::engine::path_rng;
use crate::error::{invalid, Error, Result};

/// Outcome of a synchronous coupling of two Euler paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    /// Steps at which the lower path exceeded the upper one by more than
    /// `slack`, summed over paths.
    pub violations: usize,
    /// Largest observed `X_k - Y_k`; may be positive without a violation.
    pub max_excess: f64,
    pub slack: f64,
    pub steps_checked: usize,
}

/// Discretisation allowance `2 C dt + 4 sqrt(dt log(1/dt))` for the
/// crossing of two Euler paths with a discontinuous drift.
pub fn coupling_slack(bound: f64, dt: f64) -> f64 {
    2.0 * bound * dt + 4.0 * (dt * (1.0 / dt).ln().max(0.0)).sqrt()
}

/// Drives paths from `x0 <= y0` with the same Gaussian increments and the
/// same Markov drift `b(t, x)`, `|b| <= bound`, and counts steps where the
/// ordering breaks by more than [`coupling_slack`].
pub fn coupled_compare<F>(drift: F, bound: f64, x0: f64, y0: f64, cfg: &SimConfig) -> Result<CouplingReport>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    cfg.validate()?;
    if cfg.d != 1 {
        return Err(invalid("coupling is one-dimensional"));
    }
    if !(x0 <= y0) {
        return Err(invalid(format!("need x0 <= y0, got {x0} > {y0}")));
    }
    if !(bound >= 0.0) || !bound.is_finite() {
        return Err(invalid("drift bound must be finite and non-negative"));
    }
    let slack = coupling_slack(bound, cfg.dt);
    let steps = cfg.step_table();
    let n_steps = steps.n;
    let clamp = |v: f64| v.clamp(-bound, bound);
    let per_path: Vec<(usize, f64)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let (mut x, mut y) = (x0, y0);
            let mut violations = 0;
            let mut max_excess = x - y;
            for k in 0..n_steps {
                let (h, sh) = steps.step(k);
                let t = steps.time(k);
                let dw = sh * rng.sample::<f64, _>(StandardNormal);
                x += clamp(drift(t, x)) * h + dw;
                y += clamp(drift(t, y)) * h + dw;
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::NonFiniteState { path: i, step: k + 1 });
                }
                let excess = x - y;
                max_excess = max_excess.max(excess);
                if excess > slack {
                    violations += 1;
                }
            }
            Ok((violations, max_excess))
        })
        .collect::<Result<_>>()?;
    Ok(CouplingReport {
        violations: per_path.iter().map(|p| p.0).sum(),
        max_excess: per_path.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
        slack,
        steps_checked: cfg.n_paths * n_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_drift_keeps_gap_exactly() {
        let cfg = SimConfig::new(1, 1.0, 0.01, 50, 2).unwrap();
        let r = coupled_compare(|_, _| 0.0, 1.0, -0.5, 0.5, &cfg).unwrap();
        assert_eq!(r.violations, 0);
        assert!((r.max_excess + 1.0).abs() < 1e-12);
    }

    #[test]
    fn attracting_sign_drift_stays_ordered() {
        let cfg = SimConfig::new(1, 1.0, 1e-3, 200, 4).unwrap();
        let r = coupled_compare(|_, x| -crate::bounds::sgn(x), 1.0, -0.5, 0.5, &cfg).unwrap();
        assert_eq!(r.violations, 0, "{r:?}");
    }

    #[test]
    fn preconditions() {
        let cfg = SimConfig::new(1, 1.0, 0.1, 5, 1).unwrap();
        assert!(coupled_compare(|_, _| 0.0, 1.0, 1.0, 0.0, &cfg).is_err());
        let cfg2 = SimConfig::new(2, 1.0, 0.1, 5, 1).unwrap();
        assert!(coupled_compare(|_, _| 0.0, 1.0, 0.0, 1.0, &cfg2).is_err());
    }
}
