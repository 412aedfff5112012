//! Dynamic programming for the discrete-time version of the control problem
//! whose value is the largest (smallest) probability of ending in a small
//! ball around the origin.

mod grid;
mod report;
mod solver;

pub use grid::{DPGrid, BOUNDARY_MASS_LIMIT};
pub use report::{
    ball_probability_oracle, dp_convergence_check, dp_policy_is_bangbang, BangBangReport,
    ConvergenceReport, ConvergenceRow, PolicyException,
};
pub use solver::{dp_solve, DPSolution, Objective, INDIFFERENCE};
