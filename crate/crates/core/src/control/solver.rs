//! Backward induction for `sup / inf_v P(|x + Σ v_k dt + W(T)| <= eps)`
//! over controls `|v_k| <= C` that are constant on each step.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::DPGrid;
use crate::error::{invalid, Result};
use crate::numerics::{std_normal_cdf, std_normal_pdf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Maximize,
    Minimize,
}

impl Objective {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::Maximize => a > b,
            Objective::Minimize => a < b,
        }
    }
}

/// Below this spread of the candidate values the control is irrelevant.
pub const INDIFFERENCE: f64 = 1e-14;

/// Kernel tails beyond this many standard deviations are dropped.
const KERNEL_SIGMAS: f64 = 8.0;

const GOLDEN_ITERS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DPSolution {
    pub grid: DPGrid,
    pub objective: Objective,
    /// `values[k][i] = V_k(x_i)` for `k = 0..=n_steps`.
    pub values: Vec<Vec<f64>>,
    /// Optimal control at step `k`, node `i`.
    pub policy: Vec<Vec<f64>>,
    /// Nodes where every admissible control gives the same value (to
    /// [`INDIFFERENCE`]).
    pub indifferent: Vec<Vec<bool>>,
}

impl DPSolution {
    /// `V_k` at an arbitrary point by cubic interpolation.
    pub fn value_at(&self, k: usize, x: f64) -> Result<f64> {
        let slice = self
            .values
            .get(k)
            .ok_or_else(|| invalid(format!("no time slice {k}")))?;
        if !(x >= self.grid.space_min && x <= self.grid.space_max) {
            return Err(invalid(format!("{x} is outside the space grid")));
        }
        let pos = (x - self.grid.space_min) / self.grid.spacing();
        Ok(cubic_at(slice, pos))
    }

    /// `V_0(x0)` at the start the grid was built for.
    pub fn start_value(&self) -> Result<f64> {
        self.value_at(0, self.grid.x0)
    }

    /// Columns `x, value, policy, indifferent` for step `k`; the terminal
    /// slice has no policy column values.
    pub fn write_slice_csv<W: Write>(&self, mut w: W, k: usize) -> Result<()> {
        let values = self
            .values
            .get(k)
            .ok_or_else(|| invalid(format!("no time slice {k}")))?;
        writeln!(w, "x,value,policy,indifferent")?;
        for (i, v) in values.iter().enumerate() {
            let x = self.grid.node(i);
            match self.policy.get(k) {
                Some(p) => writeln!(w, "{x},{v},{},{}", p[i], self.indifferent[k][i])?,
                None => writeln!(w, "{x},{v},,")?,
            }
        }
        Ok(())
    }
}

/// 4-point Lagrange interpolation of node values at fractional index `pos`;
/// values beyond the grid are taken as the nearest end value.
fn cubic_at(v: &[f64], pos: f64) -> f64 {
    let n = v.len() as isize;
    let k = pos.floor();
    let f = pos - k;
    let k = k as isize;
    let at = |j: isize| v[j.clamp(0, n - 1) as usize];
    if f == 0.0 {
        return at(k);
    }
    let (p0, p1, p2, p3) = (at(k - 1), at(k), at(k + 1), at(k + 2));
    let w0 = -f * (f - 1.0) * (f - 2.0) / 6.0;
    let w1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
    let w2 = -(f + 1.0) * f * (f - 2.0) / 2.0;
    let w3 = (f + 1.0) * f * (f - 1.0) / 6.0;
    w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3
}

/// Best shift in `[-reach, reach]` for one node: every whole-cell offset is
/// tried, then a golden-section search refines around the best of them.
/// Returns `(shift, value, indifferent)`.
fn optimise<F: Fn(f64) -> f64>(f: F, reach: f64, h: f64, objective: Objective) -> (f64, f64, bool) {
    let cells = (reach / h + 1e-9).floor() as i64;
    let mut candidates: Vec<f64> = (-cells..=cells).map(|j| j as f64 * h).collect();
    if (cells as f64 * h - reach).abs() > 1e-12 * reach.max(1.0) {
        candidates.push(-reach);
        candidates.push(reach);
    }
    let (mut best_s, mut best_v) = (candidates[0], f(candidates[0]));
    let (mut lo_v, mut hi_v) = (best_v, best_v);
    for &s in &candidates[1..] {
        let v = f(s);
        lo_v = lo_v.min(v);
        hi_v = hi_v.max(v);
        if objective.better(v, best_v) {
            best_s = s;
            best_v = v;
        }
    }
    if hi_v - lo_v <= INDIFFERENCE {
        return (best_s, best_v, true);
    }
    // golden section on the bracket around the best whole-cell shift
    let (mut a, mut b) = ((best_s - h).max(-reach), (best_s + h).min(reach));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if objective.better(fc, fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if b - a < 1e-12 * h {
            break;
        }
    }
    let (s, v) = if objective.better(fc, fd) { (c, fc) } else { (d, fd) };
    if objective.better(v, best_v) {
        (s, v, false)
    } else {
        (best_s, best_v, false)
    }
}

/// Gaussian step `E[V(x + sqrt(dt) ξ)]` on the grid: trapezoid weights
/// `h φ_σ(jh)` truncated at 8σ and renormalised; mass leaving the grid is
/// lost.
fn convolve(v: &[f64], h: f64, sigma: f64) -> Vec<f64> {
    let half = (KERNEL_SIGMAS * sigma / h).ceil() as isize;
    let mut w: Vec<f64> = (-half..=half)
        .map(|j| std_normal_pdf(j as f64 * h / sigma))
        .collect();
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    let n = v.len() as isize;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let lo = (i - half).max(0);
            let hi = (i + half).min(n - 1);
            (lo..=hi)
                .map(|j| w[(j - i + half) as usize] * v[j as usize])
                .sum()
        })
        .collect()
}

/// Solves the discrete control problem on `grid` by backward induction.
///
/// The last step is done in closed form, `E[1{|y + σξ| <= eps}] =
/// Φ((y + eps)/σ) - Φ((y - eps)/σ)`; earlier steps convolve on the grid.
pub fn dp_solve(grid: &DPGrid, objective: Objective) -> Result<DPSolution> {
    grid.validate()?;
    let n = grid.n_steps;
    let h = grid.spacing();
    let dt = grid.dt();
    let sigma = dt.sqrt();
    let reach = grid.c * dt;
    let eps = grid.eps;
    let nodes = grid.nodes();

    let terminal: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let overlap = ((x + 0.5 * h).min(eps) - (x - 0.5 * h).max(-eps)).max(0.0);
            overlap / h
        })
        .collect();

    let mut values = vec![Vec::new(); n + 1];
    let mut policy = vec![Vec::new(); n];
    let mut indifferent = vec![Vec::new(); n];
    values[n] = terminal;

    for k in (0..n).rev() {
        let step: Vec<(f64, f64, bool)> = if k + 1 == n {
            nodes
                .par_iter()
                .map(|&x| {
                    let f = |s: f64| {
                        let y = x + s;
                        std_normal_cdf((y + eps) / sigma) - std_normal_cdf((y - eps) / sigma)
                    };
                    optimise(f, reach, h, objective)
                })
                .collect()
        } else {
            let w = convolve(&values[k + 1], h, sigma);
            (0..nodes.len())
                .into_par_iter()
                .map(|i| {
                    let f = |s: f64| cubic_at(&w, i as f64 + s / h);
                    optimise(f, reach, h, objective)
                })
                .collect()
        };
        values[k] = step.iter().map(|r| r.1.clamp(0.0, 1.0)).collect();
        policy[k] = step.iter().map(|r| r.0 / dt).collect();
        indifferent[k] = step.iter().map(|r| r.2).collect();
    }

    Ok(DPSolution {
        grid: grid.clone(),
        objective,
        values,
        policy,
        indifferent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn one_step_closed_forms() {
        let g = DPGrid::new(1.0, 0.1, 1.0, 0.0, 1).unwrap();
        let max = dp_solve(&g, Objective::Maximize).unwrap();
        assert_relative_eq!(max.start_value().unwrap(), 0.0796556745540579673, max_relative = 1e-12);
        assert!(max.policy[0][g.n_space / 2].abs() < 1e-6);
        let min = dp_solve(&g, Objective::Minimize).unwrap();
        assert_relative_eq!(min.start_value().unwrap(), 0.0483940644003768268, max_relative = 1e-12);
        assert!((min.policy[0][g.n_space / 2].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_and_bounded() {
        let g = DPGrid::new(1.0, 0.25, 1.0, 0.0, 8).unwrap();
        let sol = dp_solve(&g, Objective::Maximize).unwrap();
        let v = &sol.values[0];
        let n = v.len();
        for i in 0..n {
            assert!((v[i] - v[n - 1 - i]).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&v[i]));
        }
    }

    #[test]
    fn terminal_slice_is_smoothed_indicator() {
        let g = DPGrid::new(1.0, 0.25, 1.0, 0.0, 2).unwrap();
        let sol = dp_solve(&g, Objective::Maximize).unwrap();
        let mass: f64 = sol.values[2].iter().sum::<f64>() * g.spacing();
        assert!((mass - 0.5).abs() < 1e-12);
    }

    #[test]
    fn huge_ball_gives_one() {
        let g = DPGrid::new(1.0, 10.0, 1.0, 0.0, 4).unwrap();
        for obj in [Objective::Maximize, Objective::Minimize] {
            let v = dp_solve(&g, obj).unwrap().start_value().unwrap();
            assert!((v - 1.0).abs() < 1e-6, "{obj:?}: {v}");
        }
    }

    #[test]
    fn cubic_reproduces_cubics() {
        let v: Vec<f64> = (0..10).map(|i| { let x = i as f64; x * x * x - 2.0 * x }).collect();
        let x: f64 = 4.3;
        assert_relative_eq!(cubic_at(&v, x), x.powi(3) - 2.0 * x, max_relative = 1e-12);
    }
}
