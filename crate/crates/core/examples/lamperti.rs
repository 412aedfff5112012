//! Bounds for dX = b dt + σ(X) dW with state-dependent σ via the change of
//! variables F(x) = ∫ du/σ(u), checked against a simulation.
//!
//! cargo run --release --example lamperti

use density_bounds::bounds::{lamperti_bounds, LampertiModel};
use density_bounds::density::histogram;
use density_bounds::numerics::QuadratureConfig;
use density_bounds::sde::path_rng;
use rand::Rng;
use rand_distr::StandardNormal;

fn sigma(x: f64) -> f64 {
    1.0 + 0.3 * x.clamp(-1.0, 1.0)
}

fn main() -> density_bounds::Result<()> {
    let qcfg = QuadratureConfig::default();
    let model = LampertiModel::new(sigma, 0.3, 0.5, 0.7, 0.0)?;
    println!("transformed drift bound {:.4}", model.transformed_drift_bound());

    // Euler for dX = 0.5 sin(3X) dt + σ(X) dW
    let (t, dt, n) = (1.0, 1e-3, 100_000);
    let mut xs: Vec<f64> = (0..n)
        .map(|i| {
            let mut rng = path_rng(1, i);
            let mut x = 0.0f64;
            for _ in 0..(t / dt) as usize {
                let xi: f64 = rng.sample(StandardNormal);
                x += 0.5 * (3.0 * x).sin() * dt + sigma(x) * dt.sqrt() * xi;
            }
            x
        })
        .collect();
    let grid: Vec<f64> = (-8..=8).map(|i| 0.25 * i as f64).collect();
    let est = histogram(&mut xs, &grid, 0.05)?;
    println!("{:>6} {:>10} {:>10} {:>8} {:>10}", "x", "lower", "rho_hat", "ci", "upper");
    for (i, &x) in grid.iter().enumerate() {
        let (lo, hi) = lamperti_bounds(&model, t, x, &qcfg)?;
        println!(
            "{x:>6.2} {lo:>10.5} {:>10.5} {:>8.5} {hi:>10.5}",
            est.values[i], est.half_widths[i]
        );
    }
    Ok(())
}
