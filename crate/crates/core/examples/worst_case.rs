//! The extremal processes dY = ±sgn(Y) dt + dW: simulated ball
//! probabilities against the closed-form origin densities, and the
//! square-radius SDE against |Y|².
//!
//! cargo run --release --example worst_case

use density_bounds::bounds::{p0, q0};
use density_bounds::density::ks_two_sample;
use density_bounds::numerics::{integrate, QuadratureConfig};
use density_bounds::sde::{simulate_square_radius, simulate_worst, SimConfig, WorstCase};

fn main() -> density_bounds::Result<()> {
    let qcfg = QuadratureConfig::default();
    let cfg = SimConfig::new(1, 1.0, 1e-3, 200_000, 7)?;
    let eps = 0.25;
    for kind in [WorstCase::Minus, WorstCase::Plus] {
        let s = simulate_worst(kind, &[0.0], &cfg)?;
        let n = s.n_paths() as f64;
        let p_hat = s.terminal_values().iter().filter(|y| y.abs() <= eps).count() as f64 / n;
        let se = (p_hat * (1.0 - p_hat) / n).sqrt();
        let density = |y: f64| match kind {
            WorstCase::Minus => q0(1.0, y).unwrap(),
            WorstCase::Plus => p0(1.0, y).unwrap(),
        };
        let exact = 2.0 * integrate(density, 0.0, eps, &qcfg)?.value;
        println!(
            "{:?}: P(|Y(1)| <= {eps}) simulated {p_hat:.5} ± {se:.5}, exact {exact:.5}",
            kind
        );
    }

    let n = 50_000;
    let cfg = SimConfig::new(1, 1.0, 1e-3, n, 8)?;
    let mut squared: Vec<f64> = simulate_worst(WorstCase::Minus, &[0.0], &cfg)?
        .terminal_values()
        .iter()
        .map(|y| y * y)
        .collect();
    let cfg = SimConfig { seed: 9, ..cfg };
    let mut direct = simulate_square_radius(WorstCase::Minus, &[0.0], &cfg)?
        .terminal_values()
        .to_vec();
    let ks = ks_two_sample(&mut squared, &mut direct)?;
    println!(
        "KS(|Y|², Z) = {:.5}, 1% critical value {:.5}",
        ks.statistic, ks.critical_1pct
    );
    Ok(())
}
