//! Closed-form and convolution formulas for the density bounds.
//!
//! Naming follows the two extremal processes: `q` is the transition density
//! of `Y⁻` (drift `-sgn(Y)`, attracted to the origin) and `p` that of `Y⁺`
//! (drift `+sgn(Y)`, repelled). The upper bound is `beta_{t,C}(x) =
//! C q_{tC²}(Cx, 0)` and the lower bound `alpha_{t,C}(x) = C p_{tC²}(Cx, 0)`.

mod alphabeta;
mod hitting;
mod lamperti;
mod multidim;
mod origin;
mod transition;

pub use alphabeta::{alpha1, alpha1_convolution, beta1, beta1_convolution, gaussian_density};
pub use hitting::{rho_tau, rho_theta, HittingKernel, HittingKind};
pub use lamperti::{lamperti_bounds, LampertiModel};
pub use multidim::{alpha_d_lower, beta_d_upper, BoundsQuery};
pub use origin::{p0, q0};
pub use transition::{
    accepted_plus_prefactor, p_density, p_density_with, q_density, resolve_plus_prefactor,
    transition_mass, PlusPrefactor, PrefactorResolution,
};

use crate::error::{invalid, Result};

/// Generalised signum: `x/|x|` off the origin and `0` at it.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("time must be positive and finite, got {t}")))
    }
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {v}")))
    }
}
