//! Shape and identity checks on alpha, beta and the transition densities.

use approx::assert_relative_eq;
use density_bounds::bounds::{
    alpha1, alpha_d_lower, beta1, beta_d_upper, gaussian_density, lamperti_bounds, p_density,
    q_density, transition_mass, BoundsQuery, LampertiModel,
};
use density_bounds::numerics::{integrate, std_normal_cdf, std_normal_pdf, QuadratureConfig};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

const TIMES: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
const CS: [f64; 3] = [0.5, 1.0, 2.0];

fn x_grid(hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| hi * i as f64 / n as f64).collect()
}

#[test]
fn symmetric_in_x() {
    let cfg = cfg();
    for t in TIMES {
        for c in CS {
            for x in x_grid(4.0, 16) {
                assert_eq!(alpha1(t, c, x, &cfg).unwrap(), alpha1(t, c, -x, &cfg).unwrap());
                assert_eq!(beta1(t, c, x, &cfg).unwrap(), beta1(t, c, -x, &cfg).unwrap());
            }
        }
    }
}

#[test]
fn nonincreasing_on_half_line() {
    let cfg = cfg();
    for t in TIMES {
        for c in CS {
            let xs = x_grid(5.0, 50);
            let a: Vec<f64> = xs.iter().map(|&x| alpha1(t, c, x, &cfg).unwrap()).collect();
            let b: Vec<f64> = xs.iter().map(|&x| beta1(t, c, x, &cfg).unwrap()).collect();
            for w in a.windows(2).chain(b.windows(2)) {
                assert!(w[1] <= w[0] + 1e-8, "t={t} c={c}: {} then {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn ordered_and_positive() {
    let cfg = cfg();
    for t in TIMES {
        for c in CS {
            for x in x_grid(5.0, 25) {
                let a = alpha1(t, c, x, &cfg).unwrap();
                let b = beta1(t, c, x, &cfg).unwrap();
                assert!(a > 0.0 && a <= b, "t={t} c={c} x={x}: {a} {b}");
            }
        }
    }
}

#[test]
fn maxima_closed_forms() {
    let cfg = cfg();
    for t in TIMES {
        for c in CS {
            let z = c * t.sqrt();
            let beta = std_normal_pdf(z) / t.sqrt() + c * std_normal_cdf(z);
            let alpha = std_normal_pdf(z) / t.sqrt() - c * std_normal_cdf(-z);
            assert_relative_eq!(beta1(t, c, 0.0, &cfg).unwrap(), beta, max_relative = 1e-10);
            assert_relative_eq!(alpha1(t, c, 0.0, &cfg).unwrap(), alpha, max_relative = 1e-10);
        }
    }
}

#[test]
fn transition_densities_normalised() {
    let cfg = cfg();
    for (t, x) in [(0.5, 0.3), (1.0, 1.0), (1.0, 0.7)] {
        let mq = transition_mass(|y| q_density(t, x, y, &cfg), t, x, &cfg).unwrap();
        let mp = transition_mass(|y| p_density(t, x, y, &cfg), t, x, &cfg).unwrap();
        assert!((mq - 1.0).abs() < 1e-6, "q mass {mq} at t={t} x={x}");
        assert!((mp - 1.0).abs() < 1e-6, "p mass {mp} at t={t} x={x}");
    }
}

#[test]
fn tail_decays_like_shifted_gaussian() {
    // beta_{1,1}(x) e^{x²/2 - x} settles to a constant; an extra factor x
    // would grow without bound
    let cfg = cfg();
    let scaled: Vec<f64> = [5.0, 6.0, 7.0, 8.0]
        .iter()
        .map(|&x: &f64| beta1(1.0, 1.0, x, &cfg).unwrap() * (x * x / 2.0 - x).exp())
        .collect();
    let limit = (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
    for (i, s) in scaled.iter().enumerate() {
        assert!(*s > limit && *s < 1.5 * limit, "x={}: {s}", i + 5);
    }
    assert!(scaled.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn gaussian_inside_band() {
    let cfg = cfg();
    for c in [0.5, 1.0] {
        for t in [0.25, 1.0] {
            for x in x_grid(4.0, 40) {
                let g = gaussian_density(t, x).unwrap();
                let a = alpha1(t, c, x, &cfg).unwrap();
                let b = beta1(t, c, x, &cfg).unwrap();
                assert!(a <= g && g <= b, "c={c} t={t} x={x}: {a} {g} {b}");
            }
        }
    }
}

#[test]
fn scaling_identity() {
    let cfg = cfg();
    for t in [0.25, 1.0] {
        for c in [0.5, 2.0, 3.0] {
            for x in [0.0, 0.3, 1.0, 2.5] {
                let b = beta1(t, c, x, &cfg).unwrap();
                let b1 = c * beta1(t * c * c, 1.0, c * x, &cfg).unwrap();
                assert_relative_eq!(b, b1, max_relative = 1e-9);
                let a = alpha1(t, c, x, &cfg).unwrap();
                let a1 = c * alpha1(t * c * c, 1.0, c * x, &cfg).unwrap();
                assert_relative_eq!(a, a1, max_relative = 1e-9);
            }
        }
    }
}

#[test]
fn reversibility_and_reflection() {
    // the invariant measure of dY = -sgn(Y) dt + dW is e^{-2|y|}
    let cfg = cfg();
    for (x, y) in [(0.5, 1.2), (-0.3, 0.8), (1.5, -0.4), (0.2, 0.2)] {
        let xy = q_density(0.7, x, y, &cfg).unwrap();
        let yx = q_density(0.7, y, x, &cfg).unwrap();
        assert_relative_eq!(
            (-2.0 * f64::abs(x)).exp() * xy,
            (-2.0 * f64::abs(y)).exp() * yx,
            max_relative = 1e-8
        );
        assert_relative_eq!(xy, q_density(0.7, -x, -y, &cfg).unwrap(), max_relative = 1e-10);
        assert_relative_eq!(
            p_density(0.7, x, y, &cfg).unwrap(),
            p_density(0.7, -x, -y, &cfg).unwrap(),
            max_relative = 1e-10
        );
    }
}

#[test]
fn chapman_kolmogorov() {
    let cfg = cfg();
    let (t1, t2, x) = (0.4, 0.6, 0.5);
    let direct = q_density(t1 + t2, x, 0.0, &cfg).unwrap();
    let f = |z: f64| q_density(t2, z, 0.0, &cfg).unwrap() * q_density(t1, x, z, &cfg).unwrap();
    let qc = QuadratureConfig::new(1e-9, 1e-8, 2000).unwrap();
    let composed: f64 = [(-8.0, 0.0), (0.0, x), (x, 8.0)]
        .iter()
        .map(|&(a, b)| integrate(f, a, b, &qc).unwrap().value)
        .sum();
    assert!((direct - composed).abs() < 1e-4, "{direct} vs {composed}");
}

#[test]
fn product_bounds_ordered() {
    let cfg = cfg();
    for d in [2, 3] {
        for r in [0.0, 0.5, 1.0, 2.0] {
            let mut x = vec![0.0; d];
            x[0] = r;
            x[d - 1] += r / 2.0;
            let q = BoundsQuery::new(1.0, 1.0, x).unwrap();
            let lo = alpha_d_lower(&q, &cfg).unwrap();
            let hi = beta_d_upper(&q, &cfg).unwrap();
            assert!(lo > 0.0 && lo <= hi, "d={d} r={r}: {lo} {hi}");
        }
    }
}

#[test]
fn lamperti_constant_sigma() {
    let cfg = cfg();
    let model = LampertiModel::new(|_| 2.0, 0.0, 1.0, 2.0, 0.0).unwrap();
    for x in [0.0, 0.4, -1.0, 2.0] {
        let (lo, hi) = lamperti_bounds(&model, 1.0, x, &cfg).unwrap();
        assert_relative_eq!(lo, alpha1(1.0, 0.5, x / 2.0, &cfg).unwrap() / 2.0, max_relative = 1e-9);
        assert_relative_eq!(hi, beta1(1.0, 0.5, x / 2.0, &cfg).unwrap() / 2.0, max_relative = 1e-9);
    }
    let wavy = LampertiModel::new(|x: f64| 1.0 + 0.1 * x.clamp(-1.0, 1.0), 0.1, 1.0, 0.9, 0.0).unwrap();
    let (lo, hi) = lamperti_bounds(&wavy, 1.0, 0.0, &cfg).unwrap();
    assert!(0.0 < lo && lo < hi);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn band_contains_gaussian(t in 0.05f64..3.0, c in 0.05f64..3.0, x in -5.0f64..5.0) {
        let cfg = cfg();
        let a = alpha1(t, c, x, &cfg).unwrap();
        let b = beta1(t, c, x, &cfg).unwrap();
        let g = gaussian_density(t, x).unwrap();
        prop_assert!(a <= g * (1.0 + 1e-12) && g <= b * (1.0 + 1e-12));
    }

    #[test]
    fn scaling_holds_anywhere(t in 0.05f64..2.0, c in 0.2f64..3.0, x in -3.0f64..3.0) {
        let cfg = cfg();
        let b = beta1(t, c, x, &cfg).unwrap();
        let b1 = c * beta1(t * c * c, 1.0, c * x, &cfg).unwrap();
        prop_assert!((b - b1).abs() <= 1e-9 * b.max(1e-300));
    }
}
