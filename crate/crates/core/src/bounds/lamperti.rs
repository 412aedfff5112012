//! Bounds for `dX = b dt + σ(X) dW` in one dimension via the change of
//! variables `F(x) = ∫_0^x du / σ(u)`, which turns `X` into a unit-noise
//! SDE with drift bounded by `C_b/ε + L/2`.

use super::alphabeta::{alpha1, beta1};
use super::{check_finite, check_time};
use crate::error::{invalid, Error, Result};
use crate::numerics::{try_integrate_singular, QuadratureConfig, SingularEnd};

/// Half-width of the window around the start on which `σ` is screened.
const SCREEN_HALF_WIDTH: f64 = 10.0;
const SCREEN_POINTS: usize = 2001;

/// A state-dependent diffusion coefficient together with the constants the
/// bounds need.
pub struct LampertiModel<S> {
    pub sigma: S,
    pub sigma_lipschitz: f64,
    pub drift_bound: f64,
    pub epsilon_lower: f64,
    pub x0: f64,
}

impl<S: Fn(f64) -> f64> LampertiModel<S> {
    /// Builds the model after screening `σ` on a grid around `x0` for the
    /// floor and the Lipschitz bound.
    pub fn new(
        sigma: S,
        sigma_lipschitz: f64,
        drift_bound: f64,
        epsilon_lower: f64,
        x0: f64,
    ) -> Result<Self> {
        let model = Self {
            sigma,
            sigma_lipschitz,
            drift_bound,
            epsilon_lower,
            x0,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("x0", self.x0)?;
        if !(self.epsilon_lower > 0.0) || !self.epsilon_lower.is_finite() {
            return Err(invalid("sigma floor must be positive"));
        }
        if !(self.sigma_lipschitz >= 0.0) || !(self.drift_bound >= 0.0) {
            return Err(invalid("Lipschitz constant and drift bound must be non-negative"));
        }
        let h = 2.0 * SCREEN_HALF_WIDTH / (SCREEN_POINTS - 1) as f64;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..SCREEN_POINTS {
            let x = self.x0 - SCREEN_HALF_WIDTH + h * i as f64;
            let s = self.sigma_checked(x)?;
            if let Some((px, ps)) = prev {
                // small slack for rounding in σ itself
                if (s - ps).abs() > self.sigma_lipschitz * (x - px) * (1.0 + 1e-9) + 1e-14 {
                    return Err(Error::LipschitzViolated {
                        lipschitz: self.sigma_lipschitz,
                        x: px,
                        y: x,
                    });
                }
            }
            prev = Some((x, s));
        }
        Ok(())
    }

    /// Drift bound of the transformed unit-noise SDE.
    pub fn transformed_drift_bound(&self) -> f64 {
        self.drift_bound / self.epsilon_lower + 0.5 * self.sigma_lipschitz
    }

    /// `F(x) - F(x0) = ∫_{x0}^x du / σ(u)`.
    pub fn transform_increment(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        check_finite("x", x)?;
        if x == self.x0 {
            return Ok(0.0);
        }
        let (a, b, sign) = if x > self.x0 {
            (self.x0, x, 1.0)
        } else {
            (x, self.x0, -1.0)
        };
        let r = try_integrate_singular(
            |u| self.sigma_checked(u).map(|s| 1.0 / s),
            a,
            b,
            SingularEnd::None,
            cfg,
        )?;
        Ok(sign * r.value)
    }

    fn sigma_checked(&self, x: f64) -> Result<f64> {
        let s = (self.sigma)(x);
        if s >= self.epsilon_lower && s.is_finite() {
            Ok(s)
        } else {
            Err(Error::SigmaBelowFloor {
                x,
                sigma: s,
                floor: self.epsilon_lower,
            })
        }
    }
}

/// `(lower, upper)` bounds on the time-`t` density of `X` at `x`.
pub fn lamperti_bounds<S: Fn(f64) -> f64>(
    model: &LampertiModel<S>,
    t: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    check_time(t)?;
    let y = model.transform_increment(x, cfg)?.abs();
    let c = model.transformed_drift_bound();
    let s = model.sigma_checked(x)?;
    Ok((alpha1(t, c, y, cfg)? / s, beta1(t, c, y, cfg)? / s))
}
