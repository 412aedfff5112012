//! Monte Carlo simulation of SDEs with bounded, possibly path-dependent
//! drift and unit additive noise.

mod config;
mod coupling;
mod drift;
mod engine;
mod expr;
mod sample;

pub use config::SimConfig;
pub use coupling::{coupled_compare, coupling_slack, CouplingReport};
pub use drift::{named_drift, worst_minus, worst_plus, DriftFunctional, PathView, DRIFT_SUITE};
pub use engine::{
    path_rng, simulate, simulate_square_radius, simulate_square_radius_with, simulate_worst,
    worst_case_drift, SquareRadiusScheme, WorstCase,
};
pub use expr::Expr;
pub use sample::{SampleMeta, SampleSet};
