//! Two Euler paths driven by the same noise and the same Markov drift stay
//! ordered up to a discretisation slack.
//!
//! cargo run --release --example coupling

use density_bounds::bounds::sgn;
use density_bounds::sde::{coupled_compare, SimConfig};

fn main() -> density_bounds::Result<()> {
    let cfg = SimConfig::new(1, 1.0, 1e-3, 10_000, 5)?;
    type Drift = fn(f64, f64) -> f64;
    let suite: [(&str, Drift, f64, f64); 3] = [
        ("-sgn(x)", |_, x| -sgn(x), -0.5, 0.5),
        ("0", |_, _| 0.0, -0.5, 0.5),
        ("clamp(-5x)", |_, x| (-5.0 * x).clamp(-1.0, 1.0), 0.0, 0.1),
    ];
    for (name, drift, x0, y0) in suite {
        let r = coupled_compare(drift, 1.0, x0, y0, &cfg)?;
        println!(
            "{name:<11} x0 = {x0:+.1}, y0 = {y0:+.1}: {} violations in {} steps, max excess {:+.4} (slack {:.4})",
            r.violations, r.steps_checked, r.max_excess, r.slack
        );
    }
    Ok(())
}
