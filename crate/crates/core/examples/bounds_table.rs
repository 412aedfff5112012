//! Prints alpha and beta for C = 1 at the four panel times, with the
//! Gaussian density they enclose.
//!
//! cargo run --release --example bounds_table

use density_bounds::bounds::{alpha1, beta1, gaussian_density};
use density_bounds::numerics::QuadratureConfig;

fn main() -> density_bounds::Result<()> {
    let cfg = QuadratureConfig::default();
    for t in [0.25, 0.5, 0.75, 1.0] {
        println!("t = {t}");
        println!("{:>6} {:>14} {:>14} {:>14}", "x", "alpha", "gaussian", "beta");
        for i in 0..=12 {
            let x = 0.25 * i as f64;
            println!(
                "{x:>6.2} {:>14.10} {:>14.10} {:>14.10}",
                alpha1(t, 1.0, x, &cfg)?,
                gaussian_density(t, x)?,
                beta1(t, 1.0, x, &cfg)?
            );
        }
        println!();
    }
    // larger C squeezes the band
    for c in [0.5, 1.0, 2.0, 4.0] {
        println!(
            "C = {c}: alpha(1, C, 0) = {:.6e}, beta(1, C, 0) = {:.6}",
            alpha1(1.0, c, 0.0, &cfg)?,
            beta1(1.0, c, 0.0, &cfg)?
        );
    }
    Ok(())
}
