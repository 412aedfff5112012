//! Transition densities `q_t(x, y)` of `Y⁻` and `p_t(x, y)` of `Y⁺`.
//!
//! For `x ≠ 0` each density splits at the first hitting time of the origin:
//! a killed-drifted-Gaussian part for paths that have not reached `0` yet,
//! plus the convolution of the origin density with the hitting-time density.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::hitting::{HittingKernel, HittingKind};
use super::origin::{p0_unchecked, q0_unchecked};
use super::{check_finite, check_time, sgn};
use crate::error::{invalid, Error, Result};
use crate::numerics::{
    integrate_singular, try_integrate_singular, QuadratureConfig, SingularEnd, FRAC_1_SQRT_2PI,
};

/// Prefactor on the not-yet-hit term of `p_t(x, y)`.
///
/// The published formula for `Y⁺` carries `2/sqrt(2πt)` where the `Y⁻`
/// formula has `1/sqrt(2πt)`. Both are kept and the one that yields a
/// probability density is selected at run time by
/// [`resolve_plus_prefactor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlusPrefactor {
    One,
    Two,
}

impl PlusPrefactor {
    pub fn factor(self) -> f64 {
        match self {
            PlusPrefactor::One => 1.0,
            PlusPrefactor::Two => 2.0,
        }
    }
}

/// Outcome of the normalisation test that picks the `Y⁺` prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefactorResolution {
    pub accepted: PlusPrefactor,
    pub mass_one: f64,
    pub mass_two: f64,
    pub t: f64,
    pub x: f64,
    pub tolerance: f64,
}

/// Start point and horizon of the normalisation probe.
const PROBE_T: f64 = 1.0;
const PROBE_X: f64 = 0.5;
const MASS_TOLERANCE: f64 = 1e-6;

/// Integrates `p_t(x, ·)` over the real line for both prefactors and accepts
/// the unique variant whose mass is within `1e-6` of one.
pub fn resolve_plus_prefactor(cfg: &QuadratureConfig) -> Result<PrefactorResolution> {
    let mass = |pf: PlusPrefactor| {
        transition_mass(
            |y| p_density_with(pf, PROBE_T, PROBE_X, y, cfg),
            PROBE_T,
            PROBE_X,
            cfg,
        )
    };
    let mass_one = mass(PlusPrefactor::One)?;
    let mass_two = mass(PlusPrefactor::Two)?;
    let ok_one = (mass_one - 1.0).abs() <= MASS_TOLERANCE;
    let ok_two = (mass_two - 1.0).abs() <= MASS_TOLERANCE;
    let accepted = match (ok_one, ok_two) {
        (true, false) => PlusPrefactor::One,
        (false, true) => PlusPrefactor::Two,
        _ => {
            return Err(invalid(format!(
                "cannot resolve the Y+ prefactor: masses {mass_one} (factor 1) and {mass_two} (factor 2)"
            )))
        }
    };
    Ok(PrefactorResolution {
        accepted,
        mass_one,
        mass_two,
        t: PROBE_T,
        x: PROBE_X,
        tolerance: MASS_TOLERANCE,
    })
}

/// The prefactor accepted by [`resolve_plus_prefactor`] at default
/// quadrature settings, computed once per process.
pub fn accepted_plus_prefactor() -> Result<PlusPrefactor> {
    static RESOLVED: OnceLock<std::result::Result<PlusPrefactor, String>> = OnceLock::new();
    RESOLVED
        .get_or_init(|| {
            resolve_plus_prefactor(&QuadratureConfig::default())
                .map(|r| r.accepted)
                .map_err(|e| e.to_string())
        })
        .clone()
        .map_err(Error::InvalidArgument)
}

/// `∫ density(y) dy` over `R`, split at the kink `y = 0` and truncated
/// `12 sqrt(t)` beyond the reach `|x| + t` of the drift, where the Gaussian
/// tail is below `1e-30`.
pub fn transition_mass<F>(density: F, t: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_time(t)?;
    let reach = x.abs() + t + 12.0 * t.sqrt();
    let left = try_integrate_singular(&density, -reach, 0.0, SingularEnd::None, cfg)?;
    let right = try_integrate_singular(&density, 0.0, reach, SingularEnd::None, cfg)?;
    Ok(left.value + right.value)
}

/// Transition density `q_t(x, y)` of `Y⁻`.
pub fn q_density(t: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    check_finite("x", x)?;
    check_finite("y", y)?;
    if x == 0.0 {
        return Ok(q0_unchecked(t, y));
    }
    let survive = killed_gaussian(t, x, y, -1.0);
    let kernel = HittingKernel {
        kind: HittingKind::TauMinus,
        x,
    };
    let hit = hitting_convolution(t, |tau| q0_unchecked(tau, y), &kernel, cfg)?;
    Ok(survive + hit)
}

/// Transition density `p_t(x, y)` of `Y⁺`, with the prefactor chosen by
/// [`accepted_plus_prefactor`].
pub fn p_density(t: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    p_density_with(accepted_plus_prefactor()?, t, x, y, cfg)
}

/// Transition density of `Y⁺` with an explicit prefactor variant.
pub fn p_density_with(
    prefactor: PlusPrefactor,
    t: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_time(t)?;
    check_finite("x", x)?;
    check_finite("y", y)?;
    if x == 0.0 {
        return Ok(p0_unchecked(t, y));
    }
    let survive = prefactor.factor() * killed_gaussian(t, x, y, 1.0);
    let kernel = HittingKernel {
        kind: HittingKind::ThetaPlus,
        x,
    };
    let hit = hitting_convolution(t, |tau| p0_unchecked(tau, y), &kernel, cfg)?;
    Ok(survive + hit)
}

/// Density at `y` of the process started at `x ≠ 0`, restricted to paths
/// that have not hit the origin; `drift_sign` is `-1` for `Y⁻`, `+1` for `Y⁺`.
fn killed_gaussian(t: f64, x: f64, y: f64, drift_sign: f64) -> f64 {
    // 1{sgn(xy) >= 0} with sgn(0) = 0
    if sgn(x * y) < 0.0 {
        return 0.0;
    }
    let shifted = sgn(x) * (x - y) + drift_sign * t;
    let gauss = FRAC_1_SQRT_2PI / t.sqrt() * (-shifted * shifted / (2.0 * t)).exp();
    gauss * -(-2.0 * x * y / t).exp_m1()
}

/// `∫_0^t origin(t - s) ρ(s) ds`, split at `t/2`: the left half is smooth
/// (ρ vanishes faster than any power at `0⁺`), the right half may carry a
/// `1/sqrt(t - s)` singularity from the origin density and is substituted.
fn hitting_convolution<G>(
    t: f64,
    origin: G,
    kernel: &HittingKernel,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let integrand = |s: f64| origin(t - s) * kernel.density_unchecked(s);
    let half = 0.5 * t;
    let left = integrate_singular(integrand, 0.0, half, SingularEnd::None, cfg)?;
    let right = integrate_singular(integrand, half, t, SingularEnd::Right, cfg)?;
    Ok(left.value + right.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn origin_start_reduces_to_closed_form() {
        assert_relative_eq!(q_density(1.0, 0.0, 0.0, &cfg()).unwrap(), 1.0833154705876863, max_relative = 1e-14);
        assert_relative_eq!(
            p_density_with(PlusPrefactor::One, 1.0, 0.0, 0.0, &cfg()).unwrap(),
            0.0833154705876863,
            max_relative = 1e-12
        );
    }

    #[test]
    fn mirror_symmetry() {
        for (t, x) in [(0.5, 0.4), (1.0, 1.2)] {
            let a = q_density(t, x, 0.0, &cfg()).unwrap();
            let b = q_density(t, -x, 0.0, &cfg()).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        for (x, y) in [(0.3, 0.8), (1.1, -0.4), (-0.6, -2.0)] {
            let a = q_density(1.0, x, y, &cfg()).unwrap();
            let b = q_density(1.0, -x, -y, &cfg()).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn prefactor_resolves_to_one() {
        let r = resolve_plus_prefactor(&cfg()).unwrap();
        assert_eq!(r.accepted, PlusPrefactor::One);
        assert!((r.mass_one - 1.0).abs() <= 1e-6, "{r:?}");
        assert!((r.mass_two - 1.0).abs() > 0.1, "{r:?}");
        assert_eq!(accepted_plus_prefactor().unwrap(), PlusPrefactor::One);
    }

    #[test]
    fn p_density_nonnegative_on_grid() {
        for i in 0..=12 {
            for j in 0..=12 {
                let x = -3.0 + 0.5 * i as f64;
                let y = -3.0 + 0.5 * j as f64;
                let v = p_density(1.0, x, y, &cfg()).unwrap();
                assert!(v >= 0.0, "p_1({x}, {y}) = {v}");
            }
        }
    }

    #[test]
    fn killed_part_vanishes_across_origin() {
        assert_eq!(killed_gaussian(1.0, 0.5, -0.2, -1.0), 0.0);
        assert_eq!(killed_gaussian(1.0, 0.5, 0.0, 1.0), 0.0);
        assert!(killed_gaussian(1.0, -0.5, -0.2, -1.0) > 0.0);
    }
}
