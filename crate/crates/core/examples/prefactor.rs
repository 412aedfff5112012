//! The transition density of Y⁺ started off the origin comes in two
//! variants differing by a factor on the not-yet-hit term. Normalisation
//! and a simulation both pick the same one.
//!
//! cargo run --release --example prefactor

use density_bounds::bounds::resolve_plus_prefactor;
use density_bounds::density::plus_prefactor_mc_check;
use density_bounds::numerics::QuadratureConfig;
use density_bounds::sde::SimConfig;

fn main() -> density_bounds::Result<()> {
    let qcfg = QuadratureConfig::default();
    let r = resolve_plus_prefactor(&qcfg)?;
    println!(
        "mass with factor 1: {:.10}, factor 2: {:.10} -> {:?}",
        r.mass_one, r.mass_two, r.accepted
    );
    let cfg = SimConfig::new(1, r.t, 1e-3, 200_000, 17)?;
    let grid = [-1.0, -0.25, 0.25, 0.5, 1.0, 2.0];
    let mc = plus_prefactor_mc_check(r.x, &cfg, &grid, 0.05, &qcfg)?;
    for row in &mc.rows {
        println!(
            "y = {:+.2}: simulated {:.4} ± {:.4}, factor 1 {:.4}, factor 2 {:.4}",
            row.y, row.rho_hat, row.ci, row.factor_one, row.factor_two
        );
    }
    println!("simulation supports {:?}", mc.supported());
    Ok(())
}
