//! Product bounds for the density of a `d`-dimensional SDE.

use serde::{Deserialize, Serialize};

use super::alphabeta::{alpha1, beta1};
use super::check_time;
use crate::error::{invalid, Result};
use crate::numerics::{unit_ball_volume, QuadratureConfig};

/// One evaluation point of the bounds: dimension, horizon, drift bound and
/// displacement from the start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsQuery {
    pub d: usize,
    pub t: f64,
    pub c: f64,
    pub x: Vec<f64>,
}

impl BoundsQuery {
    pub fn new(t: f64, c: f64, x: Vec<f64>) -> Result<Self> {
        let q = Self { d: x.len(), t, c, x };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        check_time(self.t)?;
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(invalid(format!("drift bound must be positive, got {}", self.c)));
        }
        if self.d == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if self.x.len() != self.d {
            return Err(invalid(format!(
                "point has {} coordinates, dimension is {}",
                self.x.len(),
                self.d
            )));
        }
        if self.x.iter().any(|v| !v.is_finite()) {
            return Err(invalid("point must be finite"));
        }
        Ok(())
    }
}

/// `2^d / (C_d d^{d/2}) ∏ alpha_{t,C}(x_i)`, a lower bound for the density
/// of any `d`-dimensional SDE with drift norm at most `C`.
pub fn alpha_d_lower(q: &BoundsQuery, cfg: &QuadratureConfig) -> Result<f64> {
    q.validate()?;
    let d = q.d as f64;
    let mut prod = 2f64.powi(q.d as i32) / (unit_ball_volume(q.d) * d.powf(0.5 * d));
    for &xi in &q.x {
        prod *= alpha1(q.t, q.c, xi, cfg)?;
    }
    Ok(prod)
}

/// `2^d / C_d ∏ beta_{t,C}(x_i)`, the matching upper bound.
pub fn beta_d_upper(q: &BoundsQuery, cfg: &QuadratureConfig) -> Result<f64> {
    q.validate()?;
    let mut prod = 2f64.powi(q.d as i32) / unit_ball_volume(q.d);
    for &xi in &q.x {
        prod *= beta1(q.t, q.c, xi, cfg)?;
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn one_dimension_is_exact() {
        for x in [0.0, 0.4, -1.7] {
            let q = BoundsQuery::new(0.8, 1.3, vec![x]).unwrap();
            assert_eq!(beta_d_upper(&q, &cfg()).unwrap(), beta1(0.8, 1.3, x, &cfg()).unwrap());
            assert_eq!(alpha_d_lower(&q, &cfg()).unwrap(), alpha1(0.8, 1.3, x, &cfg()).unwrap());
        }
    }

    #[test]
    fn planar_upper_at_origin() {
        let q = BoundsQuery::new(1.0, 1.0, vec![0.0, 0.0]).unwrap();
        assert_relative_eq!(beta_d_upper(&q, &cfg()).unwrap(), 1.4942387995128753, max_relative = 1e-13);
    }

    #[test]
    fn lower_below_upper_on_grid() {
        for i in -3..=3 {
            for j in -3..=3 {
                let q = BoundsQuery::new(1.0, 1.0, vec![0.5 * i as f64, 0.5 * j as f64]).unwrap();
                assert!(alpha_d_lower(&q, &cfg()).unwrap() <= beta_d_upper(&q, &cfg()).unwrap());
            }
        }
    }

    #[test]
    fn invalid_queries() {
        assert!(BoundsQuery::new(1.0, 0.0, vec![0.0]).is_err());
        assert!(BoundsQuery::new(1.0, 1.0, vec![]).is_err());
        let q = BoundsQuery { d: 3, t: 1.0, c: 1.0, x: vec![0.0] };
        assert!(beta_d_upper(&q, &cfg()).is_err());
    }
}
