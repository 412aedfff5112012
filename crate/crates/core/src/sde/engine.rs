//! Left-point Euler engine and the extremal processes built on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::drift::{unit_direction, DriftFunctional, PathView};
use super::sample::{SampleMeta, SampleSet};
use crate::error::{invalid, Error, Result};

/// Independent Gaussian stream of path `path`: ChaCha8 keyed by the seed,
/// with the path index as stream id, so a path's draws do not depend on how
/// paths are spread over threads.
pub fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

/// The two sign-drift processes `dY = ±sgn(Y) dt + dW`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WorstCase {
    /// Drift `+sgn(Y)`, repelled from the origin.
    Plus,
    /// Drift `-sgn(Y)`, attracted to the origin.
    Minus,
}

impl WorstCase {
    fn sign(self) -> f64 {
        match self {
            WorstCase::Plus => 1.0,
            WorstCase::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WorstCase::Plus => "plus",
            WorstCase::Minus => "minus",
        }
    }
}

/// Discretisation of `dZ = (d ± 2 sqrt(Z)) dt + 2 sqrt(Z) dB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SquareRadiusScheme {
    /// Milstein step followed by reflection at zero. The default: the
    /// square-root diffusion has a density spike at `0` for `d = 1` that
    /// plain Euler resolves only at `O(sqrt(dt))`.
    #[default]
    MilsteinReflected,
    /// Euler with `sqrt(max(Z, 0))` in both coefficients; the reported
    /// value is `max(Z, 0)`.
    EulerFullTruncation,
}

fn check_start(x0: &[f64], cfg: &SimConfig) -> Result<()> {
    cfg.validate()?;
    if x0.len() != cfg.d {
        return Err(invalid(format!(
            "start has {} coordinates, config dimension is {}",
            x0.len(),
            cfg.d
        )));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(invalid("start must be finite"));
    }
    Ok(())
}

/// Simulates `dX = b(t, X) dt + dW` by left-point Euler,
/// `X_{k+1} = X_k + b(t_k, X|[0,t_k]) dt + sqrt(dt) ξ_k`.
pub fn simulate(drift: &DriftFunctional, x0: &[f64], cfg: &SimConfig) -> Result<SampleSet> {
    check_start(x0, cfg)?;
    let d = cfg.d;
    let steps = cfg.step_table();
    let n_steps = steps.n;
    let mut terminal = vec![0.0; cfg.n_paths * d];
    let path_len = (n_steps + 1) * d;
    let mut paths = cfg
        .store_full_paths
        .then(|| vec![0.0; cfg.n_paths * path_len]);
    let keep_history = drift.needs_history() || cfg.store_full_paths;

    let run = |i: usize, out: &mut [f64], stored: Option<&mut [f64]>, hist: &mut Vec<f64>| -> Result<()> {
        let mut rng = path_rng(cfg.seed, i);
        let mut x = x0.to_vec();
        let mut running_max = x0.to_vec();
        let mut b = vec![0.0; d];
        hist.clear();
        if keep_history {
            hist.extend_from_slice(x0);
        }
        for k in 0..n_steps {
            let (h, sh) = steps.step(k);
            let view = PathView {
                d,
                step: k,
                t: steps.time(k),
                dt: cfg.dt,
                history: if drift.needs_history() { hist.as_slice() } else { &[] },
                current: &x,
                running_max: &running_max,
            };
            drift.eval(&view, &mut b);
            for j in 0..d {
                let xi: f64 = rng.sample(StandardNormal);
                x[j] += b[j] * h + sh * xi;
                if !x[j].is_finite() {
                    return Err(Error::NonFiniteState { path: i, step: k + 1 });
                }
                if x[j] > running_max[j] {
                    running_max[j] = x[j];
                }
            }
            if keep_history {
                hist.extend_from_slice(&x);
            }
        }
        out.copy_from_slice(&x);
        if let Some(s) = stored {
            s.copy_from_slice(hist);
        }
        Ok(())
    };

    match paths.as_mut() {
        Some(p) => terminal
            .par_chunks_mut(d)
            .zip(p.par_chunks_mut(path_len))
            .enumerate()
            .try_for_each_init(Vec::new, |hist, (i, (out, s))| run(i, out, Some(s), hist))?,
        None => terminal
            .par_chunks_mut(d)
            .enumerate()
            .try_for_each_init(Vec::new, |hist, (i, out)| run(i, out, None, hist))?,
    }

    let meta = SampleMeta {
        config: cfg.clone(),
        drift: drift.description().to_string(),
        x0: x0.to_vec(),
    };
    Ok(SampleSet::new(meta, d, terminal, paths))
}

/// Drift `±sgn(Y)` with the generalised signum, bound 1.
pub fn worst_case_drift(kind: WorstCase) -> DriftFunctional {
    let sign = kind.sign();
    DriftFunctional::markov(1.0, format!("worst-case {}", kind.label()), move |_, x, out| {
        unit_direction(x, out);
        for o in out.iter_mut() {
            *o *= sign;
        }
    })
    .expect("unit bound is valid")
}

/// Simulates `Y^±_{x0}`.
pub fn simulate_worst(kind: WorstCase, x0: &[f64], cfg: &SimConfig) -> Result<SampleSet> {
    simulate(&worst_case_drift(kind), x0, cfg)
}

/// Simulates `Z = |Y^±|²` directly from its one-dimensional SDE, with the
/// default scheme.
pub fn simulate_square_radius(kind: WorstCase, x0: &[f64], cfg: &SimConfig) -> Result<SampleSet> {
    simulate_square_radius_with(SquareRadiusScheme::default(), kind, x0, cfg)
}

pub fn simulate_square_radius_with(
    scheme: SquareRadiusScheme,
    kind: WorstCase,
    x0: &[f64],
    cfg: &SimConfig,
) -> Result<SampleSet> {
    check_start(x0, cfg)?;
    let d = cfg.d as f64;
    let sign = kind.sign();
    let steps = cfg.step_table();
    let z0: f64 = x0.iter().map(|v| v * v).sum();
    let mut terminal = vec![0.0; cfg.n_paths];
    terminal.par_iter_mut().enumerate().try_for_each(|(i, out)| {
        let mut rng = path_rng(cfg.seed, i);
        let mut z = z0;
        for k in 0..steps.n {
            let (h, sh) = steps.step(k);
            let db = sh * rng.sample::<f64, _>(StandardNormal);
            let root = z.max(0.0).sqrt();
            z = match scheme {
                SquareRadiusScheme::MilsteinReflected => {
                    (z + (d + sign * 2.0 * root) * h + 2.0 * root * db + (db * db - h)).abs()
                }
                SquareRadiusScheme::EulerFullTruncation => {
                    z + (d + sign * 2.0 * root) * h + 2.0 * root * db
                }
            };
            if !z.is_finite() {
                return Err(Error::NonFiniteState { path: i, step: k + 1 });
            }
        }
        *out = z.max(0.0);
        Ok(())
    })?;
    let meta = SampleMeta {
        config: cfg.clone(),
        drift: format!("square-radius {} ({scheme:?})", kind.label()),
        x0: x0.to_vec(),
    };
    Ok(SampleSet::new(meta, 1, terminal, None))
}
