use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::std_normal_cdf;

/// Largest admissible probability that the driving Brownian motion leaves
/// the space grid.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;

/// Finest spacing the default constructor goes down to.
const TARGET_SPACING: f64 = 0.005;

/// Space-time mesh of the backward induction: `n_steps` steps of `T/n` and a
/// uniform space grid symmetric about the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DPGrid {
    pub n_steps: usize,
    pub space_min: f64,
    pub space_max: f64,
    pub n_space: usize,
    pub t_total: f64,
    pub eps: f64,
    pub c: f64,
    /// Start the grid was sized for.
    pub x0: f64,
}

impl DPGrid {
    /// Default grid: spacing `C dt / r` so that full-strength controls move
    /// by whole cells, fine enough for both the target ball and the
    /// Gaussian step, and half-width `max(|x0|, eps) + C T + 8 sqrt(T)`.
    pub fn new(t_total: f64, eps: f64, c: f64, x0: f64, n_steps: usize) -> Result<Self> {
        let half_width = x0.abs().max(eps) + c * t_total + 8.0 * t_total.sqrt();
        Self::with_half_width(t_total, eps, c, x0, n_steps, half_width)
    }

    pub fn with_half_width(
        t_total: f64,
        eps: f64,
        c: f64,
        x0: f64,
        n_steps: usize,
        half_width: f64,
    ) -> Result<Self> {
        if n_steps == 0 {
            return Err(invalid("need at least one time step"));
        }
        if !(t_total > 0.0) || !(eps > 0.0) || !(c > 0.0) || !t_total.is_finite() || !c.is_finite() {
            return Err(invalid("T, eps and C must be positive and finite"));
        }
        if !x0.is_finite() || !(half_width > 0.0) || !half_width.is_finite() {
            return Err(invalid("x0 and half-width must be finite"));
        }
        let dt = t_total / n_steps as f64;
        let reach = c * dt;
        let per_reach = (reach / TARGET_SPACING)
            .ceil()
            .max((4.0 * reach / dt.sqrt()).ceil())
            .max(1.0);
        let h = reach / per_reach;
        let m = (half_width / h).ceil() as usize;
        let grid = Self {
            n_steps,
            space_min: -(m as f64) * h,
            space_max: m as f64 * h,
            n_space: 2 * m + 1,
            t_total,
            eps,
            c,
            x0,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_space < 3 || !(self.space_max > self.space_min) {
            return Err(invalid("space grid needs at least three nodes"));
        }
        let margin = self.space_max.min(-self.space_min) - self.x0.abs() - self.c * self.t_total;
        let boundary_mass = 4.0 * std_normal_cdf(-margin / self.t_total.sqrt());
        if boundary_mass >= BOUNDARY_MASS_LIMIT {
            return Err(Error::GridTooNarrow {
                boundary_mass,
                limit: BOUNDARY_MASS_LIMIT,
            });
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_total / self.n_steps as f64
    }

    pub fn spacing(&self) -> f64 {
        (self.space_max - self.space_min) / (self.n_space - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if self.space_min == -self.space_max {
            // exact zero at the middle node
            (i as f64 - ((self.n_space - 1) / 2) as f64) * self.spacing()
        } else {
            self.space_min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_space).map(|i| self.node(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_moves_whole_cells() {
        for n in [1, 16, 64, 256] {
            let g = DPGrid::new(1.0, 0.25, 1.0, 0.0, n).unwrap();
            let cells = g.c * g.dt() / g.spacing();
            assert!((cells - cells.round()).abs() < 1e-9, "n = {n}: {cells}");
            assert!(g.spacing() <= 0.005 + 1e-15);
            assert_eq!(g.node(g.n_space / 2), 0.0);
        }
    }

    #[test]
    fn narrow_grid_rejected() {
        assert!(matches!(
            DPGrid::with_half_width(1.0, 0.25, 1.0, 0.0, 4, 3.0),
            Err(Error::GridTooNarrow { .. })
        ));
        assert!(DPGrid::new(1.0, 0.25, 1.0, 0.0, 0).is_err());
    }
}
