use std::io::Write;

use serde::Serialize;
use serde_json::json;

use super::manifest::{OutputDir, RunHeader};
use super::{BoundsArgs, ControlArgs, Figure1Args, ObjectiveArg, Side, SimulateArgs, VerifyArgs};
use crate::bounds::{alpha1, alpha_d_lower, beta1, beta_d_upper, BoundsQuery};
use crate::control::{
    ball_probability_oracle, dp_convergence_check, dp_policy_is_bangbang, dp_solve, DPGrid,
    Objective,
};
use crate::density::{
    attainment_from_samples, sandwich_ball_from_samples, sandwich_from_samples, uniform_grid,
    Attainment, SandwichReport,
};
use crate::error::{invalid, Result};
use crate::numerics::QuadratureConfig;
use crate::sde::{
    named_drift, simulate, simulate_square_radius, worst_minus, worst_plus, SampleSet, SimConfig,
    WorstCase,
};

pub(super) type CommandOutput = (RunHeader, OutputDir, Option<serde_json::Value>);

/// Times at which the four panels are drawn.
const PANEL_TIMES: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn point(x0: &[f64], d: usize) -> Result<Vec<f64>> {
    match x0.len() {
        n if n == d => Ok(x0.to_vec()),
        1 => Ok(vec![x0[0]; d]),
        n => Err(invalid(format!("--x0 has {n} coordinates, --d is {d}"))),
    }
}

fn write_sandwich(out: &mut OutputDir, name: &str, header: &RunHeader, report: &SandwichReport) -> Result<()> {
    let mut w = out.file(name)?;
    report.write_csv(&mut w, Some(&header.csv_line()?))?;
    w.flush()?;
    Ok(())
}

fn bounds_table(out: &mut OutputDir, name: &str, header: &RunHeader, t: f64, c: f64, d: usize, grid: &[f64]) -> Result<()> {
    let cfg = QuadratureConfig::default();
    let mut w = out.file(name)?;
    writeln!(w, "# {}", header.csv_line()?)?;
    if d == 1 {
        writeln!(w, "x,alpha,beta")?;
        for &x in grid {
            writeln!(w, "{x},{},{}", alpha1(t, c, x, &cfg)?, beta1(t, c, x, &cfg)?)?;
        }
    } else {
        writeln!(w, "x,alpha_lower,beta_upper")?;
        for &x in grid {
            let mut p = vec![0.0; d];
            p[0] = x;
            let q = BoundsQuery::new(t, c, p)?;
            writeln!(w, "{x},{},{}", alpha_d_lower(&q, &cfg)?, beta_d_upper(&q, &cfg)?)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub(super) fn bounds(a: &BoundsArgs) -> Result<CommandOutput> {
    if a.d == 0 {
        return Err(invalid("--d must be at least 1"));
    }
    let header = RunHeader::new("bounds", a, None)?;
    let mut out = OutputDir::create(&a.out)?;
    let grid = uniform_grid(a.range.0, a.range.1, a.n)?;
    bounds_table(&mut out, "bounds.csv", &header, a.t, a.c, a.d, &grid)?;
    Ok((header, out, None))
}

#[derive(Serialize)]
struct PanelCheck {
    t: f64,
    drift: String,
    violations: usize,
    attainment: Attainment,
}

pub(super) fn figure1(a: &Figure1Args) -> Result<CommandOutput> {
    let header = RunHeader::new("figure1", a, Some(a.seed))?;
    let mut out = OutputDir::create(&a.out)?;
    let qcfg = QuadratureConfig::default();
    let grid = uniform_grid(-3.0, 3.0, 121)?;
    let (x_up, x_low) = (1.0, 0.25);
    let attract = worst_minus(1.0, x_up)?;
    let repel = worst_plus(1.0, x_low)?;
    let mut checks = Vec::new();
    for t in PANEL_TIMES {
        bounds_table(&mut out, &format!("bounds_t{t}.csv"), &header, t, 1.0, 1, &grid)?;
        let cfg = SimConfig::new(1, t, a.dt, a.n_paths, a.seed)?;
        for (tag, drift, x_star, upper) in [("upper", &attract, x_up, true), ("lower", &repel, x_low, false)] {
            let samples = simulate(drift, &[0.0], &cfg)?;
            let report = sandwich_from_samples(&samples, 1.0, 0.0, &grid, a.bin_width, &qcfg)?;
            write_sandwich(&mut out, &format!("density_{tag}_t{t}.csv"), &header, &report)?;
            let bound = if upper { beta1(t, 1.0, x_star, &qcfg)? } else { alpha1(t, 1.0, x_star, &qcfg)? };
            let attainment = attainment_from_samples(&samples, x_star, bound, 1.0, a.bin_width)?;
            log::info!("t = {t}, {}: {} violations, attainment {attainment:?}", drift.description(), report.violations());
            checks.push(PanelCheck {
                t,
                drift: drift.description().to_string(),
                violations: report.violations(),
                attainment,
            });
        }
    }
    out.json("checks.json", &checks)?;
    let failed: Vec<&PanelCheck> = checks
        .iter()
        .filter(|c| c.violations > 0 || !c.attainment.attained)
        .collect();
    let failure = (!failed.is_empty()).then(|| json!({ "reason": "figure1 check failed", "panels": failed }));
    Ok((header, out, failure))
}

#[derive(Serialize)]
struct SampleSummary {
    n_paths: usize,
    mean: Vec<f64>,
    variance: Vec<f64>,
}

fn summarize(s: &SampleSet) -> SampleSummary {
    let d = s.dim();
    let n = s.n_paths() as f64;
    let mut mean = vec![0.0; d];
    for row in s.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v / n;
        }
    }
    let mut variance = vec![0.0; d];
    for row in s.rows() {
        for ((q, v), m) in variance.iter_mut().zip(row).zip(&mean) {
            *q += (v - m) * (v - m) / (n - 1.0).max(1.0);
        }
    }
    SampleSummary {
        n_paths: s.n_paths(),
        mean,
        variance,
    }
}

pub(super) fn simulate_cmd(a: &SimulateArgs) -> Result<CommandOutput> {
    let header = RunHeader::new("simulate", a, Some(a.seed))?;
    let x0 = point(&a.x0.0, a.d)?;
    let cfg = SimConfig::new(a.d, a.t, a.dt, a.n_paths, a.seed)?.with_full_paths(a.full_paths);
    let samples = match a.square_radius {
        Some(side) => {
            let kind = match side {
                Side::Plus => WorstCase::Plus,
                Side::Minus => WorstCase::Minus,
            };
            simulate_square_radius(kind, &x0, &cfg)?
        }
        None => simulate(&named_drift(&a.drift, a.c, a.d)?, &x0, &cfg)?,
    };
    let mut out = OutputDir::create(&a.out)?;
    samples.save_csv(&out.path("samples.csv"))?;
    samples.save_sidecar(&out.path("samples.json"))?;
    if a.full_paths && a.square_radius.is_none() {
        samples.save_paths_csv(&out.path("paths.csv"))?;
    }
    out.json("summary.json", &summarize(&samples))?;
    Ok((header, out, None))
}


/// Touching point of the sign drifts, `(x*, attracting)`.
fn touching_point(description: &str) -> Option<(f64, bool)> {
    let (name, arg) = description.split_once('@')?;
    let x = arg.parse::<f64>().ok()?;
    match name {
        "worst-minus" => Some((x, true)),
        "worst-plus" => Some((x, false)),
        _ => None,
    }
}

pub(super) fn verify(a: &VerifyArgs) -> Result<CommandOutput> {
    let header = RunHeader::new("verify", a, Some(a.seed))?;
    let qcfg = QuadratureConfig::default();
    let x0 = point(&a.x0.0, a.d)?;
    let drift = named_drift(&a.drift, a.c, a.d)?;
    let cfg = SimConfig::new(a.d, a.t, a.dt, a.n_paths, a.seed)?;
    let samples = simulate(&drift, &x0, &cfg)?;
    let grid = uniform_grid(a.range.0, a.range.1, a.n)?;
    let mut out = OutputDir::create(&a.out)?;

    let report = if a.d == 1 {
        sandwich_from_samples(&samples, a.c, x0[0], &grid, a.bin_width, &qcfg)?
    } else {
        let points: Vec<Vec<f64>> = grid
            .iter()
            .map(|&x| {
                let mut p = vec![0.0; a.d];
                p[0] = x;
                p
            })
            .collect();
        sandwich_ball_from_samples(&samples, a.c, &x0, &points, a.eps, &qcfg)?
    };
    write_sandwich(&mut out, "sandwich.csv", &header, &report)?;
    out.json("sandwich.json", &report)?;

    let mut problems = Vec::new();
    if report.violations() > 0 {
        problems.push(json!({ "reason": "sandwich violation", "counts": report.counts }));
    }
    if a.d == 1 {
        if let Some((x_star, attracting)) = touching_point(drift.description()) {
            let rel = x_star - x0[0];
            let bound = if attracting {
                beta1(a.t, a.c, rel, &qcfg)?
            } else {
                alpha1(a.t, a.c, rel, &qcfg)?
            };
            let att = attainment_from_samples(&samples, x_star, bound, a.c, a.bin_width)?;
            log::info!("attainment at {x_star}: {att:?}");
            out.json("attainment.json", &json!({ "bound": if attracting { "beta" } else { "alpha" }, "result": att }))?;
            if !att.attained {
                problems.push(json!({ "reason": "bound not attained", "attainment": att }));
            }
        }
    }
    let failure = (!problems.is_empty()).then(|| json!({ "failures": problems }));
    Ok((header, out, failure))
}

pub(super) fn control(a: &ControlArgs) -> Result<CommandOutput> {
    let header = RunHeader::new("control", a, None)?;
    let qcfg = QuadratureConfig::default();
    let objective = match a.objective {
        ObjectiveArg::Max => Objective::Maximize,
        ObjectiveArg::Min => Objective::Minimize,
    };
    let grid = DPGrid::new(a.t, a.eps, 1.0, a.x0, a.n)?;
    let sol = dp_solve(&grid, objective)?;
    let value = sol.start_value()?;
    let oracle = ball_probability_oracle(objective, a.t, a.eps, a.x0, &qcfg)?;
    let tolerance = a.tolerance.unwrap_or(1.0 / a.n as f64);
    let bangbang = dp_policy_is_bangbang(&sol, 1e-6);
    let mut out = OutputDir::create(&a.out)?;
    {
        let mut w = out.file("value.csv")?;
        writeln!(w, "# {}", header.csv_line()?)?;
        sol.write_slice_csv(&mut w, 0)?;
        w.flush()?;
    }
    let gap = value - oracle;
    let summary = json!({
        "value": value,
        "oracle": oracle,
        "gap": gap,
        "tolerance": tolerance,
        "bang_bang": bangbang,
    });
    out.json("control.json", &summary)?;
    let mut problems = Vec::new();
    if gap.abs() > tolerance {
        problems.push(json!({ "reason": "value outside tolerance of oracle", "gap": gap, "tolerance": tolerance }));
    }
    if bangbang.fraction < 0.99 {
        problems.push(json!({ "reason": "policy not bang-bang", "fraction": bangbang.fraction }));
    }
    if let Some(list) = &a.convergence {
        let tol = a.tolerance.unwrap_or(1.0 / *list.last().unwrap_or(&a.n) as f64);
        let conv = dp_convergence_check(objective, a.t, a.eps, a.x0, list, None, tol, &qcfg)?;
        out.json("convergence.json", &conv)?;
        if !conv.monotone || !conv.within_tolerance {
            problems.push(json!({ "reason": "refinement study failed", "report": conv }));
        }
    }
    let failure = (!problems.is_empty()).then(|| json!({ "failures": problems }));
    Ok((header, out, failure))
}
