use serde::{Deserialize, Serialize};

use super::grid::DPGrid;
use super::solver::{dp_solve, DPSolution, Objective};
use crate::bounds::{accepted_plus_prefactor, p_density_with, q_density};
use crate::density::Z_99;
use crate::error::{invalid, Result};
use crate::numerics::{try_integrate_singular, QuadratureConfig, SingularEnd};
use crate::sde::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyException {
    pub step: usize,
    pub x: f64,
    pub policy: f64,
    pub expected: f64,
}

/// How often the computed optimal control is `∓C sgn(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BangBangReport {
    pub objective: Objective,
    /// Nodes farther from the origin than one step of full control plus a
    /// cell; closer nodes can reach the centre exactly and have interior
    /// optima when maximising.
    pub checked: usize,
    pub bang_bang: usize,
    pub indifferent: usize,
    pub fraction: f64,
    /// First few nodes that are not bang-bang.
    pub exceptions: Vec<PolicyException>,
}

const MAX_LISTED: usize = 20;

pub fn dp_policy_is_bangbang(sol: &DPSolution, tol: f64) -> BangBangReport {
    let g = &sol.grid;
    let cutoff = g.c * g.dt() + g.spacing();
    let sign = match sol.objective {
        Objective::Maximize => -1.0,
        Objective::Minimize => 1.0,
    };
    let (mut checked, mut bang, mut indifferent) = (0, 0, 0);
    let mut exceptions = Vec::new();
    for (k, row) in sol.policy.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            let x = g.node(i);
            if x.abs() <= cutoff {
                continue;
            }
            if sol.indifferent[k][i] {
                indifferent += 1;
                continue;
            }
            checked += 1;
            let expected = sign * g.c * x.signum();
            if (v - expected).abs() <= tol {
                bang += 1;
            } else if exceptions.len() < MAX_LISTED {
                exceptions.push(PolicyException {
                    step: k,
                    x,
                    policy: v,
                    expected,
                });
            }
        }
    }
    BangBangReport {
        objective: sol.objective,
        checked,
        bang_bang: bang,
        indifferent,
        fraction: if checked == 0 { 1.0 } else { bang as f64 / checked as f64 },
        exceptions,
    }
}

/// `P(|Y(T)| <= eps)` for the extremal process of `objective` started at
/// `x0`, by quadrature of its transition density.
pub fn ball_probability_oracle(
    objective: Objective,
    t: f64,
    eps: f64,
    x0: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    let pf = accepted_plus_prefactor()?;
    let density = |y: f64| match objective {
        Objective::Maximize => q_density(t, x0, y, cfg),
        Objective::Minimize => p_density_with(pf, t, x0, y, cfg),
    };
    // the densities have a kink at y = 0
    let left = try_integrate_singular(density, -eps, 0.0, SingularEnd::None, cfg)?;
    let right = try_integrate_singular(density, 0.0, eps, SingularEnd::None, cfg)?;
    Ok(left.value + right.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value: f64,
    /// `value - oracle`.
    pub gap: f64,
    pub bang_bang_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub objective: Objective,
    pub t: f64,
    pub eps: f64,
    pub x0: f64,
    pub oracle: f64,
    /// Monte Carlo `P̂(|Y(T)| <= eps)` and its standard error, if given.
    pub mc_estimate: Option<(f64, f64)>,
    pub rows: Vec<ConvergenceRow>,
    /// `|gap|` strictly decreasing along `rows`.
    pub monotone: bool,
    pub tolerance: f64,
    /// Final `|gap| <= tolerance + 99% MC half-width` (zero without MC).
    pub within_tolerance: bool,
    /// Limit of the last two values assuming an `O(1/n)` error.
    pub extrapolated: Option<f64>,
}

/// Solves for every `n` in `n_list` and tracks `V_0^{(n)}(x0)` against the
/// quadrature oracle and, if supplied, a simulated sample of the extremal
/// process.
#[allow(clippy::too_many_arguments)]
pub fn dp_convergence_check(
    objective: Objective,
    t: f64,
    eps: f64,
    x0: f64,
    n_list: &[usize],
    mc_oracle: Option<&SampleSet>,
    tolerance: f64,
    cfg: &QuadratureConfig,
) -> Result<ConvergenceReport> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("n_list must be non-empty and increasing"));
    }
    let oracle = ball_probability_oracle(objective, t, eps, x0, cfg)?;
    let mc_estimate = match mc_oracle {
        Some(s) => {
            if s.dim() != 1 {
                return Err(invalid("Monte Carlo oracle must be one-dimensional"));
            }
            let n = s.n_paths() as f64;
            let hits = s.terminal_values().iter().filter(|y| y.abs() <= eps).count() as f64;
            let p = hits / n;
            Some((p, (p * (1.0 - p) / n).sqrt()))
        }
        None => None,
    };
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let grid = DPGrid::new(t, eps, 1.0, x0, n)?;
        let sol = dp_solve(&grid, objective)?;
        let value = sol.start_value()?;
        let bb = dp_policy_is_bangbang(&sol, 1e-6);
        log::info!("n = {n}: V_0 = {value}, gap {:e}", value - oracle);
        rows.push(ConvergenceRow {
            n,
            value,
            gap: value - oracle,
            bang_bang_fraction: bb.fraction,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].gap.abs() < w[0].gap.abs());
    let mc_slack = mc_estimate.map_or(0.0, |(_, se)| Z_99 * se);
    let last = rows.last().expect("non-empty");
    let within_tolerance = last.gap.abs() <= tolerance + mc_slack;
    let extrapolated = (rows.len() >= 2).then(|| {
        let (a, b) = (rows[rows.len() - 2], rows[rows.len() - 1]);
        let ratio = b.n as f64 / a.n as f64;
        b.value + (b.value - a.value) / (ratio - 1.0)
    });
    Ok(ConvergenceReport {
        objective,
        t,
        eps,
        x0,
        oracle,
        mc_estimate,
        rows,
        monotone,
        tolerance,
        within_tolerance,
        extrapolated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        let cfg = QuadratureConfig::default();
        let max = ball_probability_oracle(Objective::Maximize, 1.0, 0.25, 0.0, &cfg).unwrap();
        assert!((max - 0.425276004166580630).abs() < 1e-10);
        let min = ball_probability_oracle(Objective::Minimize, 1.0, 0.25, 0.0, &cfg).unwrap();
        assert!((min - 0.0524403232876696617).abs() < 1e-10);
    }

    #[test]
    fn coarse_policies_are_bang_bang() {
        for obj in [Objective::Maximize, Objective::Minimize] {
            let g = DPGrid::new(1.0, 0.25, 1.0, 0.0, 8).unwrap();
            let sol = dp_solve(&g, obj).unwrap();
            let r = dp_policy_is_bangbang(&sol, 1e-6);
            assert!(r.checked > 0);
            assert!(r.fraction >= 0.99, "{obj:?}: {r:?}");
        }
    }

    #[test]
    fn rejects_unsorted_n() {
        let cfg = QuadratureConfig::default();
        assert!(dp_convergence_check(Objective::Maximize, 1.0, 0.25, 0.0, &[4, 2], None, 1e-3, &cfg).is_err());
    }
}
