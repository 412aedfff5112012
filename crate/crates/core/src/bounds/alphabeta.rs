//! The one-dimensional bounds `alpha_{t,C}` and `beta_{t,C}`.

use super::hitting::{HittingKernel, HittingKind};
use super::origin::{p0_unchecked, q0_unchecked};
use super::{check_finite, check_time};
use crate::error::{invalid, Result};
use crate::numerics::{
    integrate_singular, mills_ratio, std_normal_cdf, std_normal_pdf, QuadratureConfig,
    QuadratureResult, SingularEnd,
};

/// Heat kernel `exp(-x²/2t)/sqrt(2πt)`; both bounds collapse to it at `C = 0`.
pub fn gaussian_density(t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    check_finite("x", x)?;
    let rt = t.sqrt();
    Ok(std_normal_pdf(x / rt) / rt)
}

/// Upper bound `beta_{t,C}(x) = C q_{tC²}(Cx, 0)` on the time-`t` density,
/// at displacement `x` from the start, of any SDE with drift bounded by `C`.
pub fn beta1(t: f64, c: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(beta1_convolution(t, c, x, cfg)?.value)
}

/// Lower bound `alpha_{t,C}(x) = C p_{tC²}(Cx, 0)`.
pub fn alpha1(t: f64, c: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(alpha1_convolution(t, c, x, cfg)?.value)
}

/// `beta_{t,C}(x)` with the quadrature error estimate of the hitting-time
/// convolution. At `x = 0` or `C = 0` the value is exact and the estimate
/// is zero.
pub fn beta1_convolution(
    t: f64,
    c: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    validate(t, c, x)?;
    if c == 0.0 {
        return exact(gaussian_density(t, x)?);
    }
    if x == 0.0 {
        let z = c * t.sqrt();
        return exact(std_normal_pdf(z) / t.sqrt() + c * std_normal_cdf(z));
    }
    let kernel = HittingKernel {
        kind: HittingKind::TauMinus,
        x: c * x,
    };
    scaled_convolution(t * c * c, c, &kernel, q0_unchecked, cfg)
}

/// `alpha_{t,C}(x)` with its quadrature error estimate.
pub fn alpha1_convolution(
    t: f64,
    c: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    validate(t, c, x)?;
    if c == 0.0 {
        return exact(gaussian_density(t, x)?);
    }
    if x == 0.0 {
        let z = c * t.sqrt();
        return exact(std_normal_pdf(z) * (1.0 / t.sqrt() - c * mills_ratio(z)));
    }
    let kernel = HittingKernel {
        kind: HittingKind::ThetaPlus,
        x: c * x,
    };
    scaled_convolution(t * c * c, c, &kernel, p0_unchecked, cfg)
}

fn validate(t: f64, c: f64, x: f64) -> Result<()> {
    check_time(t)?;
    check_finite("x", x)?;
    if !(c >= 0.0) || !c.is_finite() {
        return Err(invalid(format!("drift bound must be finite and non-negative, got {c}")));
    }
    Ok(())
}

fn exact(value: f64) -> Result<QuadratureResult> {
    Ok(QuadratureResult {
        value,
        error_estimate: 0.0,
        subdivisions_used: 0,
    })
}

/// `C ∫_0^T origin(T - s, 0) ρ(s) ds` in scaled time `T = tC²`. The killed
/// part of the transition density vanishes at `y = 0`.
fn scaled_convolution(
    big_t: f64,
    c: f64,
    kernel: &HittingKernel,
    origin: fn(f64, f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let integrand = |s: f64| origin(big_t - s, 0.0) * kernel.density_unchecked(s);
    let half = 0.5 * big_t;
    let left = integrate_singular(integrand, 0.0, half, SingularEnd::None, cfg)?;
    let right = integrate_singular(integrand, half, big_t, SingularEnd::Right, cfg)?;
    Ok(QuadratureResult {
        value: c * (left.value + right.value),
        error_estimate: c * (left.error_estimate + right.error_estimate),
        subdivisions_used: left.subdivisions_used + right.subdivisions_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{p_density, q_density};
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    // Time-reversal of the reversible Y⁻ turns the convolution into a
    // one-line formula at C = 1.
    fn beta_reversed(t: f64, x: f64) -> f64 {
        let rt = t.sqrt();
        std_normal_pdf((x.abs() - t) / rt) / rt + std_normal_cdf((t - x.abs()) / rt)
    }

    fn alpha_reversed(t: f64, x: f64) -> f64 {
        let rt = t.sqrt();
        std_normal_pdf((x.abs() + t) / rt) / rt - std_normal_cdf(-(x.abs() + t) / rt)
    }

    #[test]
    fn origin_values() {
        assert_relative_eq!(beta1(1.0, 1.0, 0.0, &cfg()).unwrap(), 1.0833154705876863, max_relative = 1e-14);
        assert_relative_eq!(alpha1(1.0, 1.0, 0.0, &cfg()).unwrap(), 0.0833154705876863, max_relative = 1e-12);
        assert_relative_eq!(beta1(0.25, 1.0, 0.0, &cfg()).unwrap(), 1.3955931148026121, max_relative = 1e-14);
        assert_relative_eq!(beta1(1.0, 2.0, 0.0, &cfg()).unwrap(), 2.0084907026168296, max_relative = 1e-14);
    }

    #[test]
    fn convolution_matches_reversed_form() {
        for (t, x) in [(1.0, 0.5), (0.5, 1.3), (2.0, 0.2), (0.25, 1.0), (1.0, 3.0), (0.1, -0.4)] {
            let b = beta1(t, 1.0, x, &cfg()).unwrap();
            let a = alpha1(t, 1.0, x, &cfg()).unwrap();
            assert!((b - beta_reversed(t, x)).abs() < 1e-10, "beta t={t} x={x}");
            assert!((a - alpha_reversed(t, x)).abs() < 1e-10, "alpha t={t} x={x}");
        }
        assert_relative_eq!(beta1(1.0, 1.0, 0.5, &cfg()).unwrap(), 1.04352778803831258, max_relative = 1e-9);
    }

    #[test]
    fn matches_transition_density() {
        let (t, c, x) = (0.7, 1.5, 0.4);
        let big_t = t * c * c;
        let b = c * q_density(big_t, c * x, 0.0, &cfg()).unwrap();
        let a = c * p_density(big_t, c * x, 0.0, &cfg()).unwrap();
        assert_relative_eq!(beta1(t, c, x, &cfg()).unwrap(), b, max_relative = 1e-12);
        assert_relative_eq!(alpha1(t, c, x, &cfg()).unwrap(), a, max_relative = 1e-12);
    }

    #[test]
    fn zero_drift_is_gaussian() {
        let g = gaussian_density(2.0, 0.7).unwrap();
        assert_eq!(beta1(2.0, 0.0, 0.7, &cfg()).unwrap(), g);
        assert_eq!(alpha1(2.0, 0.0, 0.7, &cfg()).unwrap(), g);
    }

    #[test]
    fn ordering_around_gaussian() {
        for x in [0.0, 0.3, 1.0, 2.5] {
            let g = gaussian_density(1.0, x).unwrap();
            assert!(alpha1(1.0, 1.0, x, &cfg()).unwrap() <= g);
            assert!(beta1(1.0, 1.0, x, &cfg()).unwrap() >= g);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(beta1(0.0, 1.0, 0.0, &cfg()).is_err());
        assert!(beta1(1.0, -1.0, 0.0, &cfg()).is_err());
        assert!(alpha1(1.0, 1.0, f64::NAN, &cfg()).is_err());
    }
}
