//! Gaussian probabilities against nested Simpson quadrature of the
//! conditional densities.

use proptest::prelude::*;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use csd_core::fields::FieldModel;
use csd_core::lattice::{Connectivity, Site};
use csd_core::linalg::Matrix;
use csd_core::mvnprob::{mvn_rectangle, RectangleProblem};
use csd_core::theory::{wk_1d, wk_peak, TheorySettings};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).unwrap()
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// P(a1 < X < b1, a2 < Y < b2) for standard margins with correlation rho.
fn bivariate_rect(rho: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> f64 {
    let n = std_normal();
    let s = (1.0 - rho * rho).sqrt();
    let lo = a1.max(-9.0);
    let hi = b1.min(9.0);
    simpson(
        |x| {
            let m = rho * x;
            n.pdf(x) * (n.cdf((b2 - m) / s) - n.cdf((a2 - m) / s))
        },
        lo,
        hi,
        4000,
    )
}

/// P(X ≤ b, Y ≤ b) for standard margins with correlation c.
fn bivariate_lower(c: f64, b: f64) -> f64 {
    bivariate_rect(c, f64::NEG_INFINITY, b, f64::NEG_INFINITY, b)
}

#[test]
fn correlated_rectangle() {
    let rho = (-1.0f64).exp();
    let cov = Matrix::from_rows(&[vec![1.0, rho], vec![rho, 1.0]]).unwrap();
    for &(a1, b1, a2, b2) in &[
        (-1.0, 0.5, -0.3, 2.0),
        (0.5, 8.0, f64::NEG_INFINITY, 0.5),
        (1.5, 9.0, 1.5, 9.0),
    ] {
        let p =
            RectangleProblem::new(vec![0.0, 0.0], cov.clone(), vec![a1, a2], vec![b1, b2]).unwrap();
        let est = mvn_rectangle(&p, 1e-7).unwrap();
        let oracle = bivariate_rect(rho, a1, b1, a2, b2);
        assert!((est.value - oracle).abs() < 1e-5, "{est:?} vs {oracle}");
    }
}

/// P(X_0 > u, X_{±1} ≤ u) for a stationary unit-variance process with
/// neighbor correlation r and lag-two correlation r2.
fn singleton_1d(u: f64, r: f64, r2: f64) -> f64 {
    let n = std_normal();
    let v = 1.0 - r * r;
    let c = (r2 - r * r) / v;
    simpson(
        |x| n.pdf(x) * bivariate_lower(c, (u - r * x) / v.sqrt()),
        u,
        9.0,
        600,
    )
}

#[test]
fn correlated_singleton_in_one_dimension() {
    let model = FieldModel::preset("sq-exp-1d").unwrap();
    let settings = TheorySettings::default();
    for u in [0.5, 1.5] {
        let est = wk_1d(1, u, &model, &settings).unwrap();
        let oracle = singleton_1d(u, (-1.0f64).exp(), (-4.0f64).exp());
        assert!(
            (est.value - oracle).abs() < 5.0 * est.stderr + 1e-6,
            "u={u}: {est:?} vs {oracle}"
        );
    }
}

/// Peak events at t = 0 of X_t + cos(πt): the anchor has mean 1 and its
/// neighbors mean −1. Returns (singleton peak probability, peak probability).
fn cos_peak_at_origin(u: f64) -> (f64, f64) {
    let n = std_normal();
    let r = (-1.0f64).exp();
    let v = 1.0 - r * r;
    let c = ((-4.0f64).exp() - r * r) / v;
    // centered X_0 = x; neighbor values X_{±1} − 1 must stay below x + 1 (peak)
    // and, for the singleton, below u
    let both = |bound: &dyn Fn(f64) -> f64| {
        simpson(
            |x| n.pdf(x) * bivariate_lower(c, (bound(x) - r * x) / v.sqrt()),
            u - 1.0,
            9.0,
            600,
        )
    };
    let single = both(&|x| (x + 2.0).min(u + 1.0));
    let peak = both(&|x| x + 2.0);
    (single, peak)
}

#[test]
fn nonstationary_peak_at_origin() {
    let model = FieldModel::preset("cos-nonstat-1d").unwrap();
    let settings = TheorySettings::default();
    let o = Site::origin(1);
    for u in [0.5, 1.5] {
        let (single, peak) = cos_peak_at_origin(u);
        let est = wk_peak(1, &o, u, &model, Connectivity::Nearest, &settings).unwrap();
        assert!(
            (est.value - single).abs() < 5.0 * est.stderr + 1e-6,
            "u={u}: {est:?} vs {single}"
        );
        let den =
            csd_core::theory::peak_denominator_at(&o, u, &model, Connectivity::Nearest, &settings)
                .unwrap();
        assert!(
            (den.value - peak).abs() < 5.0 * den.stderr + 1e-6,
            "u={u}: {den:?} vs {peak}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn independent_coordinates_factorize(
        bounds in prop::collection::vec((-3.0f64..3.0, 0.1f64..3.0), 1..5)
    ) {
        let n = std_normal();
        let d = bounds.len();
        let lower: Vec<f64> = bounds.iter().map(|b| b.0).collect();
        let upper: Vec<f64> = bounds.iter().map(|b| b.0 + b.1).collect();
        let p = RectangleProblem::new(vec![0.0; d], Matrix::identity(d), lower.clone(), upper.clone()).unwrap();
        let est = mvn_rectangle(&p, 1e-6).unwrap();
        let exact: f64 = lower.iter().zip(&upper).map(|(a, b)| n.cdf(*b) - n.cdf(*a)).product();
        prop_assert!((est.value - exact).abs() < 1e-6 * exact.max(1e-3));
    }

    #[test]
    fn bivariate_matches_quadrature(rho in -0.9f64..0.9, a in -2.0f64..1.0, w in 0.2f64..3.0) {
        let cov = Matrix::from_rows(&[vec![1.0, rho], vec![rho, 1.0]]).unwrap();
        let p = RectangleProblem::new(vec![0.0, 0.0], cov, vec![a, -a], vec![a + w, -a + w]).unwrap();
        let est = mvn_rectangle(&p, 1e-7).unwrap();
        let oracle = bivariate_rect(rho, a, a + w, -a, -a + w);
        prop_assert!((est.value - oracle).abs() < 1e-5);
    }

    #[test]
    fn widening_a_bound_never_decreases(rho in 0.0f64..0.8, b in -1.0f64..2.0, extra in 0.0f64..1.0) {
        let cov = Matrix::from_fn(3, |i, j| if i == j { 1.0 } else { rho });
        let make = |hi: f64| RectangleProblem::new(vec![0.0; 3], cov.clone(), vec![f64::NEG_INFINITY; 3], vec![hi, b, b]).unwrap();
        let narrow = mvn_rectangle(&make(b), 1e-6).unwrap();
        let wide = mvn_rectangle(&make(b + extra), 1e-6).unwrap();
        prop_assert!(wide.value + 3.0 * (wide.stderr + narrow.stderr) + 1e-9 >= narrow.value);
    }
}
