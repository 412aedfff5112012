//! Density estimates from simulated samples and their comparison with the
//! bounds.

mod estimate;
mod ks;
mod optimality;
mod sandwich;

pub use estimate::{
    estimate_ball_density, estimate_density_1d, histogram, uniform_grid, BallEstimate,
    DensityEstimate, Z_99,
};
pub use ks::{ks_two_sample, KsTest};
pub use optimality::{
    attainment_from_samples, optimality_check, optimality_report, plus_prefactor_mc_check, Attainment, AttainmentReport,
    PrefactorMcReport, PrefactorMcRow,
};
pub use sandwich::{
    sandwich_ball_from_samples, sandwich_check, sandwich_check_ball, sandwich_from_samples,
    SandwichReport, SandwichRow, Verdict, VerdictCounts,
};
