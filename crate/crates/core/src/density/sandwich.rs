use std::io::Write;

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_ball_density, estimate_density_1d};
use crate::bounds::{alpha1, alpha_d_lower, beta1, beta_d_upper, BoundsQuery};
use crate::error::{invalid, Result};
use crate::numerics::QuadratureConfig;
use crate::sde::{simulate, DriftFunctional, SampleSet, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Inside,
    ViolationLow,
    ViolationHigh,
    /// The CI is wider than the gap between the bounds.
    Inconclusive,
}

impl Verdict {
    pub fn is_violation(self) -> bool {
        matches!(self, Verdict::ViolationLow | Verdict::ViolationHigh)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inside => "inside",
            Verdict::ViolationLow => "violation_low",
            Verdict::ViolationHigh => "violation_high",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// `rho_hat` against `[alpha - margin, beta + margin]`.
    pub fn classify(alpha: f64, rho_hat: f64, beta: f64, ci: f64, margin: f64) -> Self {
        if rho_hat > beta + margin {
            Verdict::ViolationHigh
        } else if rho_hat < alpha - margin {
            Verdict::ViolationLow
        } else if 2.0 * ci > beta - alpha {
            Verdict::Inconclusive
        } else {
            Verdict::Inside
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    /// Evaluation point; a single coordinate in `d = 1`.
    pub x: Vec<f64>,
    pub alpha: f64,
    pub rho_hat: f64,
    pub ci: f64,
    pub beta: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub inside: usize,
    pub violation_low: usize,
    pub violation_high: usize,
    pub inconclusive: usize,
}

/// Estimated density against `[alpha, beta]` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub drift: String,
    pub c: f64,
    pub t: f64,
    pub x0: Vec<f64>,
    pub n_paths: usize,
    /// Histogram bin width (`d = 1`) or ball radius (`d > 1`).
    pub resolution: f64,
    pub rows: Vec<SandwichRow>,
    pub counts: VerdictCounts,
}

impl SandwichReport {
    fn new(drift: String, c: f64, x0: &[f64], samples: &SampleSet, resolution: f64, rows: Vec<SandwichRow>) -> Self {
        let mut counts = VerdictCounts::default();
        for r in &rows {
            match r.verdict {
                Verdict::Inside => counts.inside += 1,
                Verdict::ViolationLow => counts.violation_low += 1,
                Verdict::ViolationHigh => counts.violation_high += 1,
                Verdict::Inconclusive => counts.inconclusive += 1,
            }
        }
        Self {
            drift,
            c,
            t: samples.meta.config.t_end,
            x0: x0.to_vec(),
            n_paths: samples.n_paths(),
            resolution,
            rows,
            counts,
        }
    }

    pub fn violations(&self) -> usize {
        self.counts.violation_low + self.counts.violation_high
    }

    /// Row closest to `x` (first coordinate).
    pub fn row_at(&self, x: f64) -> Option<&SandwichRow> {
        self.rows
            .iter()
            .min_by(|a, b| (a.x[0] - x).abs().total_cmp(&(b.x[0] - x).abs()))
    }

    /// Columns `x, alpha, rho_hat, ci, beta, verdict`; in `d > 1` the point
    /// is written as `x1;x2;...`.
    pub fn write_csv<W: Write>(&self, mut w: W, header: Option<&str>) -> Result<()> {
        if let Some(h) = header {
            writeln!(w, "# {h}")?;
        }
        writeln!(w, "x,alpha,rho_hat,ci,beta,verdict")?;
        for r in &self.rows {
            let x: Vec<String> = r.x.iter().map(|v| v.to_string()).collect();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                x.join(";"),
                r.alpha,
                r.rho_hat,
                r.ci,
                r.beta,
                r.verdict.as_str()
            )?;
        }
        Ok(())
    }
}

/// Compares a one-dimensional sample with `alpha_{t,C}` and `beta_{t,C}`
/// around `x0`; margin is the CI plus `C * bin_width`.
pub fn sandwich_from_samples(
    samples: &SampleSet,
    c: f64,
    x0: f64,
    grid: &[f64],
    bin_width: f64,
    qcfg: &QuadratureConfig,
) -> Result<SandwichReport> {
    let t = samples.meta.config.t_end;
    let est = estimate_density_1d(samples, grid, bin_width)?;
    let mut rows = Vec::with_capacity(grid.len());
    for (i, &x) in grid.iter().enumerate() {
        let alpha = alpha1(t, c, x - x0, qcfg)?;
        let beta = beta1(t, c, x - x0, qcfg)?;
        let (rho_hat, ci) = (est.values[i], est.half_widths[i]);
        let margin = ci + c * bin_width;
        rows.push(SandwichRow {
            x: vec![x],
            alpha,
            rho_hat,
            ci,
            beta,
            margin,
            verdict: Verdict::classify(alpha, rho_hat, beta, ci, margin),
        });
    }
    Ok(SandwichReport::new(samples.meta.drift.clone(), c, &[x0], samples, bin_width, rows))
}

/// Simulates `drift` from `x0` and runs [`sandwich_from_samples`]. The drift
/// bound is the `C` of the bounds.
pub fn sandwich_check(
    drift: &DriftFunctional,
    x0: f64,
    cfg: &SimConfig,
    grid: &[f64],
    bin_width: f64,
    qcfg: &QuadratureConfig,
) -> Result<SandwichReport> {
    if cfg.d != 1 {
        return Err(invalid("use sandwich_check_ball for d > 1"));
    }
    let samples = simulate(drift, &[x0], cfg)?;
    sandwich_from_samples(&samples, drift.bound(), x0, grid, bin_width, qcfg)
}

/// Ball-density version for any dimension: compares `P(|X - p| <= eps)/V_eps`
/// with the product bounds at `p - x0`; margin is the CI plus `2 C eps`.
pub fn sandwich_ball_from_samples(
    samples: &SampleSet,
    c: f64,
    x0: &[f64],
    points: &[Vec<f64>],
    eps: f64,
    qcfg: &QuadratureConfig,
) -> Result<SandwichReport> {
    let t = samples.meta.config.t_end;
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != x0.len() {
            return Err(invalid("evaluation point and start differ in dimension"));
        }
        let rel: Vec<f64> = p.iter().zip(x0).map(|(a, b)| a - b).collect();
        let q = BoundsQuery::new(t, c, rel)?;
        let alpha = alpha_d_lower(&q, qcfg)?;
        let beta = beta_d_upper(&q, qcfg)?;
        let est = estimate_ball_density(samples, p, eps)?;
        let margin = est.ci + 2.0 * c * eps;
        rows.push(SandwichRow {
            x: p.clone(),
            alpha,
            rho_hat: est.value,
            ci: est.ci,
            beta,
            margin,
            verdict: Verdict::classify(alpha, est.value, beta, est.ci, margin),
        });
    }
    Ok(SandwichReport::new(samples.meta.drift.clone(), c, x0, samples, eps, rows))
}

pub fn sandwich_check_ball(
    drift: &DriftFunctional,
    x0: &[f64],
    cfg: &SimConfig,
    points: &[Vec<f64>],
    eps: f64,
    qcfg: &QuadratureConfig,
) -> Result<SandwichReport> {
    let samples = simulate(drift, x0, cfg)?;
    sandwich_ball_from_samples(&samples, drift.bound(), x0, points, eps, qcfg)
}
