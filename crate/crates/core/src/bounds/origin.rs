use super::check_time;
use crate::error::Result;
use crate::numerics::{mills_ratio, std_normal_cdf, std_normal_pdf};

/// Density `p_t(0, y)` of `Y⁺_0(t)`.
pub fn p0(t: f64, y: f64) -> Result<f64> {
    check_time(t)?;
    Ok(p0_unchecked(t, y))
}

/// Density `q_t(0, y)` of `Y⁻_0(t)`.
pub fn q0(t: f64, y: f64) -> Result<f64> {
    check_time(t)?;
    Ok(q0_unchecked(t, y))
}

// e^{2|y|} Φ(-(|y|+t)/√t) = φ((|y|-t)/√t) M((|y|+t)/√t) with M the Mills
// ratio, so the subtraction never forms e^{2|y|}.
pub(crate) fn p0_unchecked(t: f64, y: f64) -> f64 {
    let a = y.abs();
    let rt = t.sqrt();
    let lead = std_normal_pdf((a - t) / rt);
    lead * (1.0 / rt - mills_ratio((a + t) / rt))
}

pub(crate) fn q0_unchecked(t: f64, y: f64) -> f64 {
    let a = y.abs();
    let rt = t.sqrt();
    std_normal_pdf((t + a) / rt) / rt + (-2.0 * a).exp() * std_normal_cdf((t - a) / rt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, QuadratureConfig};
    use approx::assert_relative_eq;

    #[test]
    fn origin_values() {
        // mpmath, 30 digits
        assert_relative_eq!(p0(1.0, 0.0).unwrap(), 0.08331547058768630, max_relative = 1e-12);
        assert_relative_eq!(q0(1.0, 0.0).unwrap(), 1.0833154705876863, max_relative = 1e-14);
        assert_relative_eq!(q0(4.0, 0.0).unwrap(), 1.0042453513084148, max_relative = 1e-14);
    }

    #[test]
    fn even_in_y() {
        for y in [0.3, 1.7] {
            assert_eq!(p0(1.0, y).unwrap(), p0(1.0, -y).unwrap());
            assert_eq!(q0(1.0, y).unwrap(), q0(1.0, -y).unwrap());
        }
    }

    #[test]
    fn normalised() {
        let cfg = QuadratureConfig::default();
        for t in [0.3, 1.0, 2.5] {
            let mq = 2.0 * integrate(|y| q0_unchecked(t, y), 0.0, f64::INFINITY, &cfg).unwrap().value;
            let mp = 2.0 * integrate(|y| p0_unchecked(t, y), 0.0, f64::INFINITY, &cfg).unwrap().value;
            assert_relative_eq!(mq, 1.0, max_relative = 1e-9);
            assert_relative_eq!(mp, 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn p0_far_tail_is_finite_and_positive() {
        for y in [50.0, 400.0, 1e4] {
            let v = p0(1.0, y).unwrap();
            assert!(v.is_finite() && v >= 0.0, "y = {y}: {v}");
        }
        // moderate tail against direct evaluation
        let (t, y) = (1.0_f64, 6.0_f64);
        let direct = std_normal_pdf((y - t) / t.sqrt()) / t.sqrt()
            - (2.0 * y).exp() * std_normal_cdf(-(y + t) / t.sqrt());
        assert_relative_eq!(p0(t, y).unwrap(), direct, max_relative = 1e-9);
    }

    #[test]
    fn rejects_nonpositive_time() {
        assert!(p0(0.0, 1.0).is_err());
        assert!(q0(-1.0, 1.0).is_err());
    }
}
