//! Backward induction for the largest and smallest probability of ending
//! in [-0.25, 0.25] at T = 1 under controls bounded by 1, against the
//! sign-drift processes that should be optimal.
//!
//! cargo run --release --example control

use density_bounds::control::{dp_convergence_check, dp_policy_is_bangbang, dp_solve, DPGrid, Objective};
use density_bounds::numerics::QuadratureConfig;

fn main() -> density_bounds::Result<()> {
    let qcfg = QuadratureConfig::default();
    for objective in [Objective::Maximize, Objective::Minimize] {
        let r = dp_convergence_check(objective, 1.0, 0.25, 0.0, &[4, 16, 64, 256], None, 2e-3, &qcfg)?;
        println!("{objective:?}: oracle {:.8}", r.oracle);
        for row in &r.rows {
            println!(
                "  n = {:>4}  V0 = {:.8}  gap = {:+.3e}  n*gap = {:+.4}",
                row.n,
                row.value,
                row.gap,
                row.gap * row.n as f64
            );
        }
        if let Some(v) = r.extrapolated {
            println!("  extrapolated limit {v:.8} (gap {:+.2e})", v - r.oracle);
        }

        let sol = dp_solve(&DPGrid::new(1.0, 0.25, 1.0, 0.0, 64)?, objective)?;
        let bb = dp_policy_is_bangbang(&sol, 1e-6);
        println!(
            "  n = 64 policy: {}/{} checked nodes bang-bang, {} indifferent",
            bb.bang_bang, bb.checked, bb.indifferent
        );
    }
    Ok(())
}
