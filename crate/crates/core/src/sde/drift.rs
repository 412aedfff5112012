//! Bounded, possibly path-dependent drift functionals.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use super::expr::Expr;
use crate::error::{invalid, Error, Result};

/// What a drift may look at when evaluated at grid time `t_k`: the
/// discretised path up to and including `t_k`, never beyond.
#[derive(Debug, Clone, Copy)]
pub struct PathView<'a> {
    pub d: usize,
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    /// States `X(t_0), ..., X(t_k)` flattened row-major. Empty unless the
    /// drift asked for history.
    pub history: &'a [f64],
    pub current: &'a [f64],
    /// Coordinatewise running maximum over `t_0..=t_k`.
    pub running_max: &'a [f64],
}

impl PathView<'_> {
    /// State at grid step `j <= step`.
    pub fn state_at(&self, j: usize) -> &[f64] {
        &self.history[j * self.d..(j + 1) * self.d]
    }
}

type EvalFn = dyn Fn(&PathView<'_>, &mut [f64]) + Send + Sync;

/// A drift `b(t, path)` with `|b| <= bound`. Values outside the bound are
/// scaled back onto it and a warning is logged once per functional.
#[derive(Clone)]
pub struct DriftFunctional {
    bound: f64,
    description: String,
    needs_history: bool,
    eval: Arc<EvalFn>,
    warned: Arc<AtomicBool>,
}

impl fmt::Debug for DriftFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DriftFunctional")
            .field("bound", &self.bound)
            .field("description", &self.description)
            .field("needs_history", &self.needs_history)
            .finish()
    }
}

impl DriftFunctional {
    fn build(bound: f64, description: String, needs_history: bool, eval: Arc<EvalFn>) -> Result<Self> {
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(invalid(format!("drift bound must be finite and non-negative, got {bound}")));
        }
        Ok(Self {
            bound,
            description,
            needs_history,
            eval,
            warned: Arc::new(AtomicBool::new(false)),
        })
    }

    /// Drift depending on time and the current state only.
    pub fn markov<F>(bound: f64, description: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'static,
    {
        let eval = move |v: &PathView<'_>, out: &mut [f64]| f(v.t, v.current, out);
        Self::build(bound, description.into(), false, Arc::new(eval))
    }

    /// Drift that also reads the running maximum; no history is stored.
    pub fn with_running_max<F>(bound: f64, description: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    {
        let eval =
            move |v: &PathView<'_>, out: &mut [f64]| f(v.t, v.current, v.running_max, out);
        Self::build(bound, description.into(), false, Arc::new(eval))
    }

    /// Drift that reads the full discretised past.
    pub fn path_dependent<F>(bound: f64, description: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(&PathView<'_>, &mut [f64]) + Send + Sync + 'static,
    {
        Self::build(bound, description.into(), true, Arc::new(f))
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn needs_history(&self) -> bool {
        self.needs_history
    }

    /// Evaluates into `out` and enforces `|out| <= bound` (Euclidean norm).
    pub fn eval(&self, view: &PathView<'_>, out: &mut [f64]) {
        (self.eval)(view, out);
        let norm = if out.len() == 1 {
            out[0].abs()
        } else {
            out.iter().map(|v| v * v).sum::<f64>().sqrt()
        };
        if !(norm <= self.bound) {
            let scale = if norm.is_finite() { self.bound / norm } else { 0.0 };
            if !self.warned.swap(true, Ordering::Relaxed) {
                log::warn!(
                    "drift '{}' returned norm {norm} above bound {}; clamping",
                    self.description,
                    self.bound
                );
            }
            for v in out.iter_mut() {
                *v = if v.is_finite() { *v * scale } else { 0.0 };
            }
        }
    }
}

/// Generalised signum of a vector, `x/|x|` or `0`.
pub(crate) fn unit_direction(x: &[f64], out: &mut [f64]) {
    if x.len() == 1 {
        out[0] = sgn(x[0]);
        return;
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (o, v) in out.iter_mut().zip(x) {
            *o = v / norm;
        }
    } else {
        out.fill(0.0);
    }
}

fn sgn(x: f64) -> f64 {
    crate::bounds::sgn(x)
}

/// `-C sgn(X - a)`: pulls towards `a` with full force, so the density at
/// `a` is as large as possible. The centre is `(a, 0, ..., 0)` in `d > 1`.
pub fn worst_minus(c: f64, a: f64) -> Result<DriftFunctional> {
    toward_point(c, a, -1.0, format!("worst-minus@{a}"))
}

/// `+C sgn(X - a)`: flees `a`.
pub fn worst_plus(c: f64, a: f64) -> Result<DriftFunctional> {
    toward_point(c, a, 1.0, format!("worst-plus@{a}"))
}

fn toward_point(c: f64, a: f64, sign: f64, description: String) -> Result<DriftFunctional> {
    DriftFunctional::markov(c, description, move |_, x, out| {
        if x.len() == 1 {
            out[0] = sign * c * sgn(x[0] - a);
            return;
        }
        let norm = x
            .iter()
            .enumerate()
            .map(|(i, v)| if i == 0 { (v - a) * (v - a) } else { v * v })
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            out.fill(0.0);
            return;
        }
        for (i, (o, v)) in out.iter_mut().zip(x).enumerate() {
            let shifted = if i == 0 { v - a } else { *v };
            *o = sign * c * shifted / norm;
        }
    })
}

/// Built-in drift suite, selected by name:
///
/// | name | drift |
/// |---|---|
/// | `zero` | `0` |
/// | `const@v` | `v` on the first coordinate |
/// | `worst-minus@a` | `-C sgn(x - a)` |
/// | `worst-plus@a` | `+C sgn(x - a)` |
/// | `sin-half` | `C sin(X(t/2))`, path dependent |
/// | `running-max` | `C clamp(M(t) - X(t) - 1/2, -1, 1)` |
/// | `clamp-lin@k` | `C clamp(-k x, -1, 1)` |
/// | `expr:<formula>` | see [`Expr`]; clamped to `C` |
///
/// Coordinatewise drifts are divided by `sqrt(d)` so the norm stays below `C`.
pub fn named_drift(spec: &str, c: f64, d: usize) -> Result<DriftFunctional> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let (name, arg) = match spec.split_once('@') {
        Some((n, a)) if !spec.starts_with("expr:") => (n, Some(a)),
        _ => (spec, None),
    };
    let parse_arg = |default: Option<f64>| -> Result<f64> {
        match (arg, default) {
            (Some(a), _) => a
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::DriftSyntax(format!("bad parameter '{a}' in '{spec}'"))),
            (None, Some(v)) => Ok(v),
            (None, None) => Err(Error::DriftSyntax(format!("'{name}' needs a parameter, as in '{name}@1.0'"))),
        }
    };
    let per_coord = c / (d as f64).sqrt();
    match name {
        "zero" => DriftFunctional::markov(c, "zero", |_, _, out| out.fill(0.0)),
        "const" => {
            let v = parse_arg(None)?;
            DriftFunctional::markov(c, format!("const@{v}"), move |_, _, out| {
                out.fill(0.0);
                out[0] = v;
            })
        }
        "worst-minus" => worst_minus(c, parse_arg(Some(0.0))?),
        "worst-plus" => worst_plus(c, parse_arg(Some(0.0))?),
        "sin-half" => DriftFunctional::path_dependent(c, "sin-half", move |v, out| {
            let past = v.state_at(v.step / 2);
            for (o, p) in out.iter_mut().zip(past) {
                *o = per_coord * p.sin();
            }
        }),
        "running-max" => DriftFunctional::with_running_max(c, "running-max", move |_, x, m, out| {
            for ((o, xi), mi) in out.iter_mut().zip(x).zip(m) {
                *o = per_coord * (mi - xi - 0.5).clamp(-1.0, 1.0);
            }
        }),
        "clamp-lin" => {
            let k = parse_arg(Some(5.0))?;
            DriftFunctional::markov(c, format!("clamp-lin@{k}"), move |_, x, out| {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = per_coord * (-k * xi).clamp(-1.0, 1.0);
                }
            })
        }
        _ => {
            if let Some(src) = spec.strip_prefix("expr:") {
                let expr = Expr::parse(src)?;
                let description = format!("expr:{src}");
                if expr.uses_running_max() {
                    DriftFunctional::with_running_max(c, description, move |t, x, m, out| {
                        for ((o, xi), mi) in out.iter_mut().zip(x).zip(m) {
                            *o = expr.eval(t, *xi, *mi);
                        }
                    })
                } else {
                    DriftFunctional::markov(c, description, move |t, x, out| {
                        for (o, xi) in out.iter_mut().zip(x) {
                            *o = expr.eval(t, *xi, *xi);
                        }
                    })
                }
            } else {
                Err(Error::DriftSyntax(format!("unknown drift '{spec}'")))
            }
        }
    }
}

/// Names accepted by [`named_drift`] without a formula.
pub const DRIFT_SUITE: &[&str] = &[
    "zero",
    "const@0.5",
    "worst-minus@0",
    "worst-plus@0",
    "sin-half",
    "running-max",
    "clamp-lin@5",
];

#[cfg(test)]
mod tests {
    use super::*;

    fn view<'a>(x: &'a [f64], m: &'a [f64], hist: &'a [f64], step: usize) -> PathView<'a> {
        PathView {
            d: x.len(),
            step,
            t: step as f64 * 0.1,
            dt: 0.1,
            history: hist,
            current: x,
            running_max: m,
        }
    }

    #[test]
    fn worst_drifts_sign() {
        let minus = worst_minus(1.0, 1.0).unwrap();
        let plus = worst_plus(2.0, 0.0).unwrap();
        let mut out = [0.0];
        minus.eval(&view(&[0.3], &[0.3], &[], 0), &mut out);
        assert_eq!(out[0], 1.0);
        minus.eval(&view(&[1.0], &[1.0], &[], 0), &mut out);
        assert_eq!(out[0], 0.0);
        plus.eval(&view(&[-0.3], &[0.0], &[], 0), &mut out);
        assert_eq!(out[0], -2.0);
    }

    #[test]
    fn planar_worst_points_inward() {
        let minus = worst_minus(1.0, 0.0).unwrap();
        let mut out = [0.0; 2];
        minus.eval(&view(&[3.0, 4.0], &[3.0, 4.0], &[], 0), &mut out);
        assert!((out[0] + 0.6).abs() < 1e-15 && (out[1] + 0.8).abs() < 1e-15);
    }

    #[test]
    fn clamps_to_bound() {
        let f = DriftFunctional::markov(1.0, "too big", |_, _, out| out[0] = 3.0).unwrap();
        let mut out = [0.0];
        f.eval(&view(&[0.0], &[0.0], &[], 0), &mut out);
        assert_eq!(out[0], 1.0);
        let f = DriftFunctional::markov(1.0, "nan", |_, _, out| out[0] = f64::NAN).unwrap();
        f.eval(&view(&[0.0], &[0.0], &[], 0), &mut out);
        assert_eq!(out[0], 0.0);
    }

    #[test]
    fn suite_parses_and_respects_bound() {
        let hist = [0.5, -0.2, 1.7];
        for name in DRIFT_SUITE.iter().copied().chain(["expr:sin(3*x) + m", "const@2"]) {
            let f = named_drift(name, 1.0, 1).unwrap();
            let mut out = [0.0];
            f.eval(&view(&[1.7], &[1.7], &hist, 2), &mut out);
            assert!(out[0].abs() <= 1.0, "{name}: {}", out[0]);
        }
        assert!(named_drift("sin-half", 1.0, 1).unwrap().needs_history());
        assert!(!named_drift("running-max", 1.0, 1).unwrap().needs_history());
    }

    #[test]
    fn unknown_names_rejected() {
        assert!(matches!(named_drift("wobble", 1.0, 1), Err(Error::DriftSyntax(_))));
        assert!(matches!(named_drift("const", 1.0, 1), Err(Error::DriftSyntax(_))));
        assert!(matches!(named_drift("const@abc", 1.0, 1), Err(Error::DriftSyntax(_))));
    }
}
