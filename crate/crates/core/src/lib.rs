//! Optimal upper and lower bounds for the marginal densities of SDEs with
//! bounded, measurable, possibly path-dependent drift and additive noise.
//!
//! The bounds `alpha` and `beta` are the time-`t` densities at the origin of
//! the bang-bang SDEs `dY = ±sgn(Y) dt + dW`, after space-time scaling by the
//! drift bound `C`. The crate computes them ([`bounds`]), simulates SDEs with
//! arbitrary bounded drift ([`sde`]), checks simulated densities against the
//! bounds ([`density`]), and solves the underlying discrete-time control
//! problem by backward induction ([`control`]).
//!
//! ```
//! use density_bounds::bounds::{alpha1, beta1};
//! use density_bounds::numerics::QuadratureConfig;
//!
//! let cfg = QuadratureConfig::default();
//! let upper = beta1(1.0, 1.0, 0.0, &cfg).unwrap();
//! let lower = alpha1(1.0, 1.0, 0.0, &cfg).unwrap();
//! assert!((upper - 1.0833154706).abs() < 1e-9);
//! assert!((lower - 0.0833154706).abs() < 1e-9);
//! ```

// NaN must fail range checks, hence `!(x > 0.0)` throughout
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod cli;
pub mod control;
pub mod density;
mod error;
pub mod numerics;
pub mod sde;

pub use error::{Error, Result};
