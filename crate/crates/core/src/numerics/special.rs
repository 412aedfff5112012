use crate::error::{invalid, Result};

/// `1/sqrt(2π)`.
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function, via `erfc` so that both tails keep
/// full relative precision.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Mills ratio `Φ(-z) / φ(z)`.
///
/// Stays finite where both numerator and denominator underflow, which is what
/// makes terms like `e^{2|y|} Φ(-(|y|+t)/√t)` computable for large `|y|`.
pub fn mills_ratio(z: f64) -> f64 {
    if z < 20.0 {
        return std_normal_cdf(-z) / std_normal_pdf(z);
    }
    // Laplace continued fraction z + 1/(z + 2/(z + 3/(z + ...))), converges
    // in a handful of terms this far out.
    let mut tail = z;
    for k in (1..=40).rev() {
        tail = z + k as f64 / tail;
    }
    1.0 / tail
}

/// Volume `C_d = π^{d/2} / Γ(d/2 + 1)` of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    // exact in the two dimensions that are used most
    match d {
        1 => return 2.0,
        2 => return std::f64::consts::PI,
        _ => {}
    }
    let half = d as f64 / 2.0;
    std::f64::consts::PI.powf(half) / libm::tgamma(half + 1.0)
}

/// Volume of the Euclidean ball of radius `eps` in `R^d`.
pub fn ball_volume(d: usize, eps: f64) -> Result<f64> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid(format!("ball radius must be positive, got {eps}")));
    }
    Ok(unit_ball_volume(d) * eps.powi(d as i32))
}
