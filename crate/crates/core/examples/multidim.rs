//! Product bounds in d = 2 and the ball density of Y⁻ they must contain.
//!
//! cargo run --release --example multidim

use density_bounds::bounds::{alpha_d_lower, beta_d_upper, BoundsQuery};
use density_bounds::density::estimate_ball_density;
use density_bounds::numerics::QuadratureConfig;
use density_bounds::sde::{simulate_worst, SimConfig, WorstCase};

fn main() -> density_bounds::Result<()> {
    let qcfg = QuadratureConfig::default();
    let cfg = SimConfig::new(2, 1.0, 1e-3, 100_000, 21)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for start in [[0.0, 0.0], [1.0, 0.0], [r, r]] {
        let s = simulate_worst(WorstCase::Minus, &start, &cfg)?;
        let ball = estimate_ball_density(&s, &[0.0, 0.0], 0.2)?;
        let rel = vec![-start[0], -start[1]];
        let q = BoundsQuery::new(1.0, 1.0, rel)?;
        println!(
            "start {start:?}: lower {:.4}  ball density {:.4} ± {:.4}  upper {:.4}",
            alpha_d_lower(&q, &qcfg)?,
            ball.value,
            ball.ci,
            beta_d_upper(&q, &qcfg)?
        );
    }
    Ok(())
}
