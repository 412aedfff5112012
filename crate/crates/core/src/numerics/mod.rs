//! Special functions and adaptive quadrature.

mod quadrature;
mod special;

pub use quadrature::{
    integrate, integrate_singular, try_integrate_singular, QuadratureConfig, QuadratureResult, SingularEnd,
};
pub use special::{
    ball_volume, mills_ratio, std_normal_cdf, std_normal_pdf, unit_ball_volume, FRAC_1_SQRT_2PI,
};
