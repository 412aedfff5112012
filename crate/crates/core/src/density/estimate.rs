use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::ball_volume;
use crate::sde::SampleSet;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.5758293035489004;

/// Histogram density on a grid of bin centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub centers: Vec<f64>,
    pub values: Vec<f64>,
    /// 99% normal-approximation half-widths.
    pub half_widths: Vec<f64>,
    pub n: usize,
    pub bin_width: f64,
}

/// `ρ̂(x) = #{|X_i - x| <= h/2} / (n h)` at each grid point, with the
/// binomial CI `z sqrt(p(1-p)/n) / h`.
pub fn estimate_density_1d(samples: &SampleSet, grid: &[f64], bin_width: f64) -> Result<DensityEstimate> {
    if samples.dim() != 1 {
        return Err(invalid(format!("expected one-dimensional samples, got {}", samples.dim())));
    }
    let mut sorted = samples.terminal_values().to_vec();
    histogram(&mut sorted, grid, bin_width)
}

/// Same as [`estimate_density_1d`] on raw values; sorts `values` in place.
pub fn histogram(values: &mut [f64], grid: &[f64], bin_width: f64) -> Result<DensityEstimate> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(invalid(format!("bin width must be positive, got {bin_width}")));
    }
    values.sort_unstable_by(f64::total_cmp);
    let n = values.len();
    let nf = n as f64;
    let half = 0.5 * bin_width;
    let mut out = DensityEstimate {
        centers: grid.to_vec(),
        values: Vec::with_capacity(grid.len()),
        half_widths: Vec::with_capacity(grid.len()),
        n,
        bin_width,
    };
    for &x in grid {
        let lo = values.partition_point(|&v| v < x - half);
        let hi = values.partition_point(|&v| v <= x + half);
        let p = (hi - lo) as f64 / nf;
        out.values.push(p / bin_width);
        out.half_widths.push(Z_99 * (p * (1.0 - p) / nf).sqrt() / bin_width);
    }
    Ok(out)
}

/// `P(|X - centre| <= eps) / V_eps` with its 99% half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallEstimate {
    pub value: f64,
    pub ci: f64,
    pub hits: usize,
    pub n: usize,
    pub eps: f64,
}

pub fn estimate_ball_density(samples: &SampleSet, center: &[f64], eps: f64) -> Result<BallEstimate> {
    if samples.n_paths() == 0 {
        return Err(Error::EmptySample);
    }
    if center.len() != samples.dim() {
        return Err(invalid(format!(
            "centre has {} coordinates, samples have {}",
            center.len(),
            samples.dim()
        )));
    }
    let volume = ball_volume(samples.dim(), eps)?;
    let eps2 = eps * eps;
    let hits = samples
        .rows()
        .filter(|row| row.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() <= eps2)
        .count();
    let n = samples.n_paths();
    let p = hits as f64 / n as f64;
    Ok(BallEstimate {
        value: p / volume,
        ci: Z_99 * (p * (1.0 - p) / n as f64).sqrt() / volume,
        hits,
        n,
        eps,
    })
}

/// Evenly spaced points `lo, lo + step, ..., hi`.
pub fn uniform_grid(lo: f64, hi: f64, n_points: usize) -> Result<Vec<f64>> {
    if n_points == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!("bad grid {lo}:{hi} with {n_points} points")));
    }
    if n_points == 1 {
        return Ok(vec![lo]);
    }
    let m = (n_points - 1) as f64;
    // interpolating form keeps round values like -0.05 exact on -3:3
    Ok((0..n_points)
        .map(|i| {
            let i = i as f64;
            (lo * (m - i) + hi * i) / m
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::{SampleMeta, SimConfig};

    fn set(dim: usize, values: Vec<f64>) -> SampleSet {
        let meta = SampleMeta {
            config: SimConfig::new(dim, 1.0, 1.0, 1, 0).unwrap(),
            drift: "test".into(),
            x0: vec![0.0; dim],
        };
        SampleSet::from_rows(meta, dim, values).unwrap()
    }

    #[test]
    fn point_mass() {
        let s = set(1, vec![0.0; 100]);
        let e = estimate_density_1d(&s, &[0.0, 2.0], 1.0).unwrap();
        assert_eq!(e.values, vec![1.0, 0.0]);
        assert_eq!(e.half_widths, vec![0.0, 0.0]);
    }

    #[test]
    fn closed_bins() {
        let s = set(1, vec![-0.5, 0.5, 0.25, 0.6]);
        let e = estimate_density_1d(&s, &[0.0], 1.0).unwrap();
        assert_eq!(e.values[0], 0.75);
    }

    #[test]
    fn mass_at_most_one() {
        let vals: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.7548776662).fract() * 4.0 - 2.0).collect();
        let s = set(1, vals);
        let grid = uniform_grid(-3.0, 3.0, 121).unwrap();
        let e = estimate_density_1d(&s, &grid, 0.05).unwrap();
        let mass: f64 = e.values.iter().sum::<f64>() * 0.05;
        assert!(mass <= 1.0 + 1e-9, "{mass}");
    }

    #[test]
    fn ball_counts() {
        let s = set(2, vec![0.0, 0.0, 0.1, 0.1, 1.0, 0.0, 0.0, -0.2]);
        let b = estimate_ball_density(&s, &[0.0, 0.0], 0.2).unwrap();
        assert_eq!(b.hits, 3);
        assert!((b.value - 0.75 / (std::f64::consts::PI * 0.04)).abs() < 1e-12);
        assert!(estimate_ball_density(&s, &[0.0], 0.2).is_err());
        assert!(estimate_ball_density(&s, &[0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let s = set(2, vec![0.0, 0.0]);
        assert!(estimate_density_1d(&s, &[0.0], 0.1).is_err());
        assert!(matches!(histogram(&mut [], &[0.0], 0.1), Err(Error::EmptySample)));
        assert!(histogram(&mut [1.0], &[0.0], 0.0).is_err());
    }
}
