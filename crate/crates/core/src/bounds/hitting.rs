use serde::{Deserialize, Serialize};

use super::check_finite;
use crate::error::{invalid, Result};

/// Which first-passage time of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HittingKind {
    /// `τ₀`: hitting time of `0` by `Y⁻`, inverse Gaussian with full mass.
    TauMinus,
    /// `θ₀`: hitting time of `0` by `Y⁺`; escapes forever with positive
    /// probability.
    ThetaPlus,
}

/// First-passage law of the origin for `Y^±` started at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HittingKernel {
    pub kind: HittingKind,
    pub x: f64,
}

impl HittingKernel {
    pub fn new(kind: HittingKind, x: f64) -> Result<Self> {
        check_finite("start", x)?;
        Ok(Self { kind, x })
    }

    /// Density of the hitting time at `s > 0`. Undefined for `x = 0`, where
    /// the origin is hit at time zero.
    pub fn density(&self, s: f64) -> Result<f64> {
        if self.x == 0.0 {
            return Err(invalid("hitting time density is degenerate at x = 0"));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(invalid(format!("hitting time must be positive, got {s}")));
        }
        Ok(self.density_unchecked(s))
    }

    pub(crate) fn density_unchecked(&self, s: f64) -> f64 {
        let a = self.x.abs();
        let shifted = match self.kind {
            HittingKind::TauMinus => a - s,
            HittingKind::ThetaPlus => a + s,
        };
        let log = a.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() - 1.5 * s.ln()
            - shifted * shifted / (2.0 * s);
        log.exp()
    }

    /// `P(never hits 0)`.
    pub fn atom_at_infinity(&self) -> f64 {
        match self.kind {
            HittingKind::TauMinus => 0.0,
            HittingKind::ThetaPlus => -(-2.0 * self.x.abs()).exp_m1(),
        }
    }

    /// Total mass of the density over `(0, ∞)`.
    pub fn finite_mass(&self) -> f64 {
        1.0 - self.atom_at_infinity()
    }
}

/// Density of the first time `Y⁻_x` hits the origin.
pub fn rho_tau(x: f64, s: f64) -> Result<f64> {
    HittingKernel::new(HittingKind::TauMinus, x)?.density(s)
}

/// Density of the first time `Y⁺_x` hits the origin (defective; mass
/// `e^{-2|x|}`).
pub fn rho_theta(x: f64, s: f64) -> Result<f64> {
    HittingKernel::new(HittingKind::ThetaPlus, x)?.density(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, QuadratureConfig};
    use approx::assert_relative_eq;

    #[test]
    fn point_values() {
        assert_relative_eq!(rho_tau(1.0, 1.0).unwrap(), 0.3989422804014327, max_relative = 1e-14);
        assert_eq!(rho_tau(-1.0, 1.0).unwrap(), rho_tau(1.0, 1.0).unwrap());
        assert_relative_eq!(rho_theta(1.0, 1.0).unwrap(), 0.05399096651318805, max_relative = 1e-14);
        assert_eq!(rho_theta(-0.3, 0.7).unwrap(), rho_theta(0.3, 0.7).unwrap());
    }

    #[test]
    fn masses() {
        let cfg = QuadratureConfig::default();
        let m = integrate(|s| rho_tau(0.5, s).unwrap(), 0.0, f64::INFINITY, &cfg).unwrap();
        assert_relative_eq!(m.value, 1.0, max_relative = 1e-9);
        for x in [0.2, 1.0, -1.7] {
            let k = HittingKernel::new(HittingKind::ThetaPlus, x).unwrap();
            let m = integrate(|s| k.density(s).unwrap(), 0.0, f64::INFINITY, &cfg).unwrap();
            assert_relative_eq!(m.value, (-2.0 * f64::abs(x)).exp(), max_relative = 1e-8);
            assert_relative_eq!(k.finite_mass(), (-2.0 * f64::abs(x)).exp(), max_relative = 1e-14);
        }
        assert_eq!(HittingKernel::new(HittingKind::TauMinus, 2.0).unwrap().atom_at_infinity(), 0.0);
    }

    #[test]
    fn rejects_degenerate_arguments() {
        assert!(rho_tau(0.0, 1.0).is_err());
        assert!(rho_tau(1.0, 0.0).is_err());
        assert!(rho_theta(1.0, -1.0).is_err());
        assert!(HittingKernel::new(HittingKind::TauMinus, f64::NAN).is_err());
    }
}
