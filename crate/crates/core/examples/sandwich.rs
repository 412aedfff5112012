//! Runs every drift of the built-in suite and checks its simulated density
//! against [alpha, beta].
//!
//! cargo run --release --example sandwich -- [n_paths]

use density_bounds::density::{sandwich_check, uniform_grid};
use density_bounds::numerics::QuadratureConfig;
use density_bounds::sde::{named_drift, SimConfig, DRIFT_SUITE};

fn main() -> density_bounds::Result<()> {
    let n_paths = std::env::args().nth(1).map_or(100_000, |s| s.parse().expect("n_paths"));
    let qcfg = QuadratureConfig::default();
    let cfg = SimConfig::new(1, 1.0, 1e-3, n_paths, 3)?;
    let grid = uniform_grid(-3.0, 3.0, 61)?;
    println!("{:<28} {:>7} {:>7} {:>7} {:>7}", "drift", "inside", "low", "high", "unsure");
    for name in DRIFT_SUITE.iter().chain(&["expr:clamp(m - 2*x, -1, 1)"]) {
        let drift = named_drift(name, 1.0, 1)?;
        let r = sandwich_check(&drift, 0.0, &cfg, &grid, 0.05, &qcfg)?;
        println!(
            "{:<28} {:>7} {:>7} {:>7} {:>7}",
            name, r.counts.inside, r.counts.violation_low, r.counts.violation_high, r.counts.inconclusive
        );
    }
    Ok(())
}
