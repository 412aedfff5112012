use serde::{Deserialize, Serialize};

use super::estimate::estimate_density_1d;
use crate::bounds::{alpha1, beta1, p_density_with, PlusPrefactor};
use crate::error::{invalid, Error, Result};
use crate::numerics::QuadratureConfig;
use crate::sde::{
    simulate, simulate_worst, worst_minus, worst_plus, SampleSet, SimConfig, WorstCase,
};

/// Estimated density at the touching point against the bound it should hit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attainment {
    pub x: f64,
    pub estimate: f64,
    pub bound: f64,
    pub ci: f64,
    /// `estimate - bound`.
    pub gap: f64,
    /// `ci + C * bin_width`.
    pub tolerance: f64,
    pub attained: bool,
}

impl Attainment {
    fn new(x: f64, estimate: f64, bound: f64, ci: f64, tolerance: f64) -> Self {
        let gap = estimate - bound;
        Self {
            x,
            estimate,
            bound,
            ci,
            gap,
            tolerance,
            attained: gap.abs() <= tolerance,
        }
    }

    /// `Err(AttainmentFailed)` unless attained.
    pub fn into_result(self) -> Result<Self> {
        if self.attained {
            Ok(self)
        } else {
            Err(Error::AttainmentFailed {
                x: self.x,
                estimate: self.estimate,
                bound: self.bound,
                gap: self.gap,
                tolerance: self.tolerance,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttainmentReport {
    pub x_star: f64,
    pub t: f64,
    pub c: f64,
    /// Drift `-C sgn(x - x*)` against `beta` at `x*`.
    pub upper: Attainment,
    /// Drift `+C sgn(x - x*)` against `alpha` at `x*`.
    pub lower: Attainment,
}

impl AttainmentReport {
    pub fn attained(&self) -> bool {
        self.upper.attained && self.lower.attained
    }
}

/// Histogram estimate of `samples` at `x` against `bound`, with tolerance
/// `ci + C * bin_width`.
pub fn attainment_from_samples(
    samples: &SampleSet,
    x: f64,
    bound: f64,
    c: f64,
    bin_width: f64,
) -> Result<Attainment> {
    let e = estimate_density_1d(samples, &[x], bin_width)?;
    let (est, ci) = (e.values[0], e.half_widths[0]);
    Ok(Attainment::new(x, est, bound, ci, ci + c * bin_width))
}

/// Density at `x*` of `X(t)`, `X(0) = 0`, under the attracting and the
/// repelling sign drift centred at `x*`, compared with
/// `beta_{t,C}(x*)` and `alpha_{t,C}(x*)`.
pub fn optimality_report(
    x_star: f64,
    c: f64,
    cfg: &SimConfig,
    bin_width: f64,
    qcfg: &QuadratureConfig,
) -> Result<AttainmentReport> {
    if cfg.d != 1 {
        return Err(invalid("attainment is checked in one dimension"));
    }
    let t = cfg.t_end;
    let attract = simulate(&worst_minus(c, x_star)?, &[0.0], cfg)?;
    let upper = attainment_from_samples(&attract, x_star, beta1(t, c, x_star, qcfg)?, c, bin_width)?;
    let repel = simulate(&worst_plus(c, x_star)?, &[0.0], cfg)?;
    let lower = attainment_from_samples(&repel, x_star, alpha1(t, c, x_star, qcfg)?, c, bin_width)?;

    Ok(AttainmentReport {
        x_star,
        t,
        c,
        upper,
        lower,
    })
}

/// [`optimality_report`], failing with `AttainmentFailed` when either bound
/// is missed.
pub fn optimality_check(
    x_star: f64,
    c: f64,
    cfg: &SimConfig,
    bin_width: f64,
    qcfg: &QuadratureConfig,
) -> Result<AttainmentReport> {
    let r = optimality_report(x_star, c, cfg, bin_width, qcfg)?;
    r.upper.into_result()?;
    r.lower.into_result()?;
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefactorMcRow {
    pub y: f64,
    pub rho_hat: f64,
    pub ci: f64,
    pub factor_one: f64,
    pub factor_two: f64,
}

/// Simulated density of `Y⁺_x(t)` against both prefactor variants of the
/// transition density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefactorMcReport {
    pub x: f64,
    pub t: f64,
    pub rows: Vec<PrefactorMcRow>,
    pub consistent_one: bool,
    pub consistent_two: bool,
}

impl PrefactorMcReport {
    /// The variant the simulation supports, if exactly one.
    pub fn supported(&self) -> Option<PlusPrefactor> {
        match (self.consistent_one, self.consistent_two) {
            (true, false) => Some(PlusPrefactor::One),
            (false, true) => Some(PlusPrefactor::Two),
            _ => None,
        }
    }
}

/// A variant is consistent when every grid value lies within
/// `ci + bin_width` of the histogram.
pub fn plus_prefactor_mc_check(
    x: f64,
    cfg: &SimConfig,
    grid: &[f64],
    bin_width: f64,
    qcfg: &QuadratureConfig,
) -> Result<PrefactorMcReport> {
    let samples = simulate_worst(WorstCase::Plus, &[x], cfg)?;
    let est = estimate_density_1d(&samples, grid, bin_width)?;
    let t = cfg.t_end;
    let mut rows = Vec::with_capacity(grid.len());
    let (mut ok_one, mut ok_two) = (true, true);
    for (i, &y) in grid.iter().enumerate() {
        let one = p_density_with(PlusPrefactor::One, t, x, y, qcfg)?;
        let two = p_density_with(PlusPrefactor::Two, t, x, y, qcfg)?;
        let (rho_hat, ci) = (est.values[i], est.half_widths[i]);
        let tol = ci + bin_width;
        ok_one &= (rho_hat - one).abs() <= tol;
        ok_two &= (rho_hat - two).abs() <= tol;
        rows.push(PrefactorMcRow {
            y,
            rho_hat,
            ci,
            factor_one: one,
            factor_two: two,
        });
    }
    Ok(PrefactorMcReport {
        x,
        t,
        rows,
        consistent_one: ok_one,
        consistent_two: ok_two,
    })
}
