//! Joint Gaussian probabilities: rectangle probabilities by separation of
//! variables with randomized quasi-Monte Carlo, and the excursion-shape and
//! local-maximum events built on top of them.
//!
//! Linear constraints (peak dominance X_t - X_s > 0) are handled by an
//! augmented rectangle with a singular covariance. Rows that become linearly
//! dependent during the pivoted factorization are folded into the bounds of
//! the last column they load on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};
use crate::fields::{gaussian_layer_covariance, mean_at, FieldModel};
use crate::lattice::{exterior_neighbors, neighbors, Connectivity, Site, SiteSet};
use crate::linalg::Matrix;
use crate::shapes::peak_constraint_degree;

pub const MAX_DIMENSION: usize = 64;

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal quantile.
pub fn norm_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Qmc,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbEstimate {
    pub value: f64,
    pub stderr: f64,
    pub method: Method,
    pub evaluations: u64,
    /// False when the sample budget ran out before the error target was met.
    pub converged: bool,
}

impl ProbEstimate {
    pub fn exact(value: f64) -> Self {
        ProbEstimate {
            value,
            stderr: 0.0,
            method: Method::ClosedForm,
            evaluations: 0,
            converged: true,
        }
    }

    /// Sum of independent estimates; standard errors add in quadrature.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a ProbEstimate>) -> ProbEstimate {
        let mut value = 0.0;
        let mut var = 0.0;
        let mut evaluations = 0;
        let mut method = Method::ClosedForm;
        let mut converged = true;
        for e in items {
            value += e.value;
            var += e.stderr * e.stderr;
            evaluations += e.evaluations;
            converged &= e.converged;
            if e.method != Method::ClosedForm {
                method = e.method;
            }
        }
        ProbEstimate {
            value,
            stderr: var.sqrt(),
            method,
            evaluations,
            converged,
        }
    }

    pub fn scale(&self, factor: f64) -> ProbEstimate {
        ProbEstimate {
            value: self.value * factor,
            stderr: self.stderr * factor.abs(),
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QmcSettings {
    pub rel_tol: f64,
    /// Absolute standard-error floor below which sampling stops.
    pub abs_tol: f64,
    pub randomizations: usize,
    pub initial_points: usize,
    pub max_points: usize,
    pub seed: u64,
}

impl Default for QmcSettings {
    fn default() -> Self {
        QmcSettings {
            rel_tol: 1e-4,
            abs_tol: 1e-10,
            randomizations: 8,
            initial_points: 1 << 10,
            max_points: 1 << 16,
            seed: 0x5eed_0fc1_u64,
        }
    }
}

/// Evaluation settings shared by all event probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilitySettings {
    pub qmc: QmcSettings,
    /// Joint draws for models without a Gaussian law.
    pub mc_draws: u64,
    pub mc_seed: u64,
}

impl Default for ProbabilitySettings {
    fn default() -> Self {
        ProbabilitySettings {
            qmc: QmcSettings::default(),
            mc_draws: 10_000_000,
            mc_seed: 0xc4_15_90,
        }
    }
}

/// P(lower < X < upper) for X ~ N(mean, covariance).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleProblem {
    pub mean: Vec<f64>,
    pub covariance: Matrix,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl RectangleProblem {
    pub fn new(
        mean: Vec<f64>,
        covariance: Matrix,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        let n = mean.len();
        for (what, len) in [
            ("covariance", covariance.n()),
            ("lower", lower.len()),
            ("upper", upper.len()),
        ] {
            if len != n {
                return Err(Error::InvalidArgument(format!(
                    "{what} has dimension {len}, mean has {n}"
                )));
            }
        }
        if let Some(i) = (0..n).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::InvalidArgument(format!(
                "empty interval at coordinate {i}"
            )));
        }
        Ok(RectangleProblem {
            mean,
            covariance,
            lower,
            upper,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Pivoted factor ready for sampling.
struct Factor {
    /// Rank r; columns 0..r carry the integration variables.
    rank: usize,
    /// Lower-triangular rows (length r each) of the r pivot rows.
    l: Vec<Vec<f64>>,
    a: Vec<f64>,
    b: Vec<f64>,
    /// Dependent rows: (column they constrain, loadings on columns 0..=col, lo, hi).
    extra: Vec<(usize, Vec<f64>, f64, f64)>,
}

fn truncated_mean(lo: f64, hi: f64) -> f64 {
    let p = norm_cdf(hi) - norm_cdf(lo);
    if p <= 1e-300 {
        // degenerate interval: use the nearer finite endpoint
        return if lo.is_finite() {
            lo
        } else if hi.is_finite() {
            hi
        } else {
            0.0
        };
    }
    let phi = |x: f64| if x.is_finite() { norm_pdf(x) } else { 0.0 };
    (phi(lo) - phi(hi)) / p
}

/// `None` when a constant row makes the event impossible.
fn factorize(problem: &RectangleProblem) -> Result<Option<Factor>> {
    let n = problem.dim();
    let scale = (0..n)
        .map(|i| problem.covariance.get(i, i))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let eps = 1e-10 * scale;
    let mut cov = problem.covariance.clone();
    let mut a: Vec<f64> = (0..n).map(|i| problem.lower[i] - problem.mean[i]).collect();
    let mut b: Vec<f64> = (0..n).map(|i| problem.upper[i] - problem.mean[i]).collect();
    let mut l = vec![vec![0.0; n]; n];
    let mut y = vec![0.0; n];
    let mut rank = n;

    for j in 0..n {
        // residual variances of the remaining rows
        let mut best: Option<(usize, f64)> = None;
        for i in j..n {
            let var = cov.get(i, i) - l[i][..j].iter().map(|x| x * x).sum::<f64>();
            if var < -eps {
                return Err(Error::Indefinite { pivot: var });
            }
            if var <= eps {
                continue;
            }
            let sd = var.sqrt();
            let shift: f64 = l[i][..j].iter().zip(&y[..j]).map(|(x, z)| x * z).sum();
            let lo = (a[i] - shift) / sd;
            let hi = (b[i] - shift) / sd;
            let p = norm_cdf(hi) - norm_cdf(lo);
            if best.is_none_or(|(_, bp)| p < bp) {
                best = Some((i, p));
            }
        }
        let Some((pick, _)) = best else {
            rank = j;
            break;
        };
        // swap pick into position j
        if pick != j {
            a.swap(pick, j);
            b.swap(pick, j);
            l.swap(pick, j);
            for k in 0..n {
                let t = cov.get(pick, k);
                cov.set(pick, k, cov.get(j, k));
                cov.set(j, k, t);
            }
            for k in 0..n {
                let t = cov.get(k, pick);
                cov.set(k, pick, cov.get(k, j));
                cov.set(k, j, t);
            }
        }
        let var = cov.get(j, j) - l[j][..j].iter().map(|x| x * x).sum::<f64>();
        let d = var.sqrt();
        l[j][j] = d;
        for i in j + 1..n {
            let s = cov.get(i, j) - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            l[i][j] = s / d;
        }
        let shift: f64 = l[j][..j].iter().zip(&y[..j]).map(|(x, z)| x * z).sum();
        y[j] = truncated_mean((a[j] - shift) / d, (b[j] - shift) / d);
    }

    let mut extra = Vec::new();
    for i in rank..n {
        let row = &l[i][..rank];
        let row_scale = cov.get(i, i).sqrt().max(1e-300);
        match (0..rank).rev().find(|&k| row[k].abs() > 1e-9 * row_scale) {
            Some(col) => extra.push((col, row[..=col].to_vec(), a[i], b[i])),
            None => {
                // constant row: the constraint either always or never holds
                if !(a[i] < 0.0 && 0.0 < b[i]) {
                    return Ok(None);
                }
            }
        }
    }
    let l = l.into_iter().take(rank).map(|mut r| {
        r.truncate(rank);
        r
    });
    Ok(Some(Factor {
        rank,
        l: l.collect(),
        a: a[..rank].to_vec(),
        b: b[..rank].to_vec(),
        extra,
    }))
}

impl Factor {
    /// Integrand at a point of [0,1)^(rank-1).
    fn integrand(&self, w: &[f64], y: &mut [f64]) -> f64 {
        let mut f = 1.0;
        for j in 0..self.rank {
            let shift: f64 = self.l[j][..j].iter().zip(&y[..j]).map(|(x, z)| x * z).sum();
            let d = self.l[j][j];
            let mut lo = (self.a[j] - shift) / d;
            let mut hi = (self.b[j] - shift) / d;
            for (col, row, ea, eb) in &self.extra {
                if *col != j {
                    continue;
                }
                let s: f64 = row[..j].iter().zip(&y[..j]).map(|(x, z)| x * z).sum();
                let c = row[j];
                let (l1, h1) = ((ea - s) / c, (eb - s) / c);
                let (l1, h1) = if c > 0.0 { (l1, h1) } else { (h1, l1) };
                lo = lo.max(l1);
                hi = hi.min(h1);
            }
            if !(lo < hi) {
                return 0.0;
            }
            let p;
            if lo > -hi {
                // upper region: work with the reflected variable for accuracy
                let dl = norm_cdf(-hi);
                p = norm_cdf(-lo) - dl;
                if j + 1 < self.rank {
                    y[j] = -norm_quantile((dl + w[j] * p).clamp(1e-300, 1.0 - 1e-16));
                }
            } else {
                let dl = norm_cdf(lo);
                p = norm_cdf(hi) - dl;
                if j + 1 < self.rank {
                    y[j] = norm_quantile((dl + w[j] * p).clamp(1e-300, 1.0 - 1e-16));
                }
            }
            f *= p;
            if f == 0.0 {
                return 0.0;
            }
        }
        f
    }
}

const PRIMES: [u32; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311,
];

/// Rectangle probability with the default QMC settings and the given
/// relative error target.
pub fn mvn_rectangle(problem: &RectangleProblem, rel_tol: f64) -> Result<ProbEstimate> {
    mvn_rectangle_with(
        problem,
        &QmcSettings {
            rel_tol,
            ..QmcSettings::default()
        },
    )
}

pub fn mvn_rectangle_with(
    problem: &RectangleProblem,
    settings: &QmcSettings,
) -> Result<ProbEstimate> {
    let n = problem.dim();
    if n > MAX_DIMENSION {
        return Err(Error::TooManyVariables(n));
    }
    if n == 0 {
        return Ok(ProbEstimate::exact(1.0));
    }
    if !problem.covariance.is_symmetric(1e-10) {
        return Err(Error::InvalidArgument("covariance is not symmetric".into()));
    }
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || problem.covariance.get(i, j) == 0.0));
    if diagonal {
        let mut v = 1.0;
        for i in 0..n {
            let var = problem.covariance.get(i, i);
            if var < -1e-10 {
                return Err(Error::Indefinite { pivot: var });
            }
            let (lo, hi) = (
                problem.lower[i] - problem.mean[i],
                problem.upper[i] - problem.mean[i],
            );
            v *= if var <= 0.0 {
                f64::from(lo < 0.0 && 0.0 < hi)
            } else {
                let sd = var.sqrt();
                interval_prob(lo / sd, hi / sd)
            };
        }
        return Ok(ProbEstimate::exact(v));
    }

    let Some(factor) = factorize(problem)? else {
        return Ok(ProbEstimate::exact(0.0));
    };
    if factor.rank <= 1 {
        let mut y = vec![0.0; 1];
        let v = if factor.rank == 0 {
            1.0
        } else {
            factor.integrand(&[], &mut y)
        };
        return Ok(ProbEstimate::exact(v));
    }
    Ok(qmc_integrate(&factor, settings))
}

fn interval_prob(lo: f64, hi: f64) -> f64 {
    if lo > -hi {
        norm_cdf(-lo) - norm_cdf(-hi)
    } else {
        norm_cdf(hi) - norm_cdf(lo)
    }
}

fn qmc_integrate(factor: &Factor, settings: &QmcSettings) -> ProbEstimate {
    let dim = factor.rank - 1;
    let alpha: Vec<f64> = PRIMES[..dim]
        .iter()
        .map(|&p| (p as f64).sqrt().fract())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let reps = settings.randomizations.max(2);
    let shifts: Vec<Vec<f64>> = (0..reps)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    let mut sums = vec![0.0; reps];
    let mut w = vec![0.0; dim];
    let mut y = vec![0.0; factor.rank];
    let mut done = 0usize;
    let mut target = settings.initial_points.max(16);
    loop {
        for (s, shift) in shifts.iter().enumerate() {
            for k in done..target {
                let kf = (k + 1) as f64;
                for i in 0..dim {
                    let x = (kf * alpha[i] + shift[i]).fract();
                    w[i] = (2.0 * x - 1.0).abs();
                }
                sums[s] += factor.integrand(&w, &mut y);
            }
        }
        done = target;
        let means: Vec<f64> = sums.iter().map(|s| s / done as f64).collect();
        let value = means.iter().sum::<f64>() / reps as f64;
        let var =
            means.iter().map(|m| (m - value).powi(2)).sum::<f64>() / ((reps - 1) * reps) as f64;
        let stderr = var.sqrt();
        let ok = stderr <= settings.rel_tol * value || stderr <= settings.abs_tol;
        if ok || done >= settings.max_points {
            return ProbEstimate {
                value: value.clamp(0.0, 1.0),
                stderr,
                method: Method::Qmc,
                evaluations: (done * reps) as u64,
                converged: ok,
            };
        }
        target = (done * 2).min(settings.max_points);
    }
}

/// Probability that `lower_r < rows_r · X < upper_r` for every row, where
/// X ~ N(mean, cov).
pub fn linear_constraint_probability(
    mean: &[f64],
    cov: &Matrix,
    rows: &[(Vec<f64>, f64, f64)],
    settings: &QmcSettings,
) -> Result<ProbEstimate> {
    let n = mean.len();
    let m = rows.len();
    let aug_mean: Vec<f64> = rows
        .iter()
        .map(|(c, _, _)| c.iter().zip(mean).map(|(a, b)| a * b).sum())
        .collect();
    let mut sc = vec![vec![0.0; n]; m];
    for r in 0..m {
        for j in 0..n {
            sc[r][j] = (0..n).map(|k| rows[r].0[k] * cov.get(k, j)).sum();
        }
    }
    let aug = Matrix::from_fn(m, |r, s| (0..n).map(|j| sc[r][j] * rows[s].0[j]).sum());
    // symmetrize rounding
    let aug = Matrix::from_fn(m, |r, s| 0.5 * (aug.get(r, s) + aug.get(s, r)));
    let problem = RectangleProblem::new(
        aug_mean,
        aug,
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
    )?;
    mvn_rectangle_with(&problem, settings)
}

/// P(X ≤ u) for a white-noise site.
pub fn white_noise_p(u: f64) -> f64 {
    norm_cdf(u)
}

/// P(X > u) for a white-noise site.
pub fn white_noise_q(u: f64) -> f64 {
    1.0 - white_noise_p(u)
}

/// Variables D ∪ 𝒩(D) in a fixed order: shape sites first.
fn event_sites(shape: &SiteSet, conn: Connectivity) -> Result<(Vec<Site>, usize)> {
    let ext = exterior_neighbors(shape, conn)?;
    let mut sites: Vec<Site> = shape.to_vec();
    let k = sites.len();
    sites.extend(ext.to_vec());
    Ok((sites, k))
}

/// Monte-Carlo probability of an event on the values of `sites` for a
/// chi-squared field, with binomial standard error.
pub(crate) fn chi_squared_mc<F>(
    model: &FieldModel,
    sites: &[Site],
    settings: &ProbabilitySettings,
    event: F,
) -> Result<ProbEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    use rayon::prelude::*;
    let cov = gaussian_layer_covariance(sites, model)?;
    let l = cov.cholesky(1e-10)?;
    let n = sites.len();
    let draws = settings.mc_draws.max(1);
    let chunks = 64u64;
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = crate::fields::realization_rng(settings.mc_seed, c);
            let count = draws / chunks + u64::from(c < draws % chunks);
            let mut z = vec![0.0; n];
            let mut x = vec![0.0; n];
            let mut yv = vec![0.0; n];
            let mut vals = vec![0.0; n];
            let mut hits = 0u64;
            for _ in 0..count {
                z.iter_mut()
                    .for_each(|v| *v = StandardNormal.sample(&mut rng));
                l.lower_mul(&z, &mut x);
                z.iter_mut()
                    .for_each(|v| *v = StandardNormal.sample(&mut rng));
                l.lower_mul(&z, &mut yv);
                for i in 0..n {
                    vals[i] = (x[i] * x[i] + yv[i] * yv[i]) / 2.0 - 1.0;
                }
                hits += u64::from(event(&vals));
            }
            hits
        })
        .sum();
    let p = hits as f64 / draws as f64;
    Ok(ProbEstimate {
        value: p,
        stderr: (p * (1.0 - p) / draws as f64).sqrt(),
        method: Method::MonteCarlo,
        evaluations: draws,
        converged: true,
    })
}

/// P(X_D > u, X_𝒩(D) ≤ u).
pub fn excursion_probability(
    shape: &SiteSet,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &ProbabilitySettings,
) -> Result<ProbEstimate> {
    if shape.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: shape.dim(),
        });
    }
    if !shape.is_connected(conn) {
        return Err(Error::InvalidArgument("shape is not connected".into()));
    }
    let (sites, k) = event_sites(shape, conn)?;
    if model.is_white_noise() {
        let ext = sites.len() - k;
        return Ok(ProbEstimate::exact(
            white_noise_p(u).powi(ext as i32) * white_noise_q(u).powi(k as i32),
        ));
    }
    if !model.is_gaussian() {
        return chi_squared_mc(model, &sites, settings, |v| {
            v[..k].iter().all(|&x| x > u) && v[k..].iter().all(|&x| x <= u)
        });
    }
    let n = sites.len();
    let problem = RectangleProblem::new(
        sites.iter().map(|s| mean_at(model, s)).collect(),
        gaussian_layer_covariance(&sites, model)?,
        (0..n)
            .map(|i| if i < k { u } else { f64::NEG_INFINITY })
            .collect(),
        (0..n)
            .map(|i| if i < k { f64::INFINITY } else { u })
            .collect(),
    )?;
    mvn_rectangle_with(&problem, &settings.qmc)
}

/// P(X_D > u, X_𝒩(D) ≤ u, X_t > max over neighbors of t).
pub fn peak_event_probability(
    shape: &SiteSet,
    anchor: &Site,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &ProbabilitySettings,
) -> Result<ProbEstimate> {
    let m = peak_constraint_degree(shape, anchor, conn)?;
    if model.is_white_noise() {
        let base = excursion_probability(shape, u, model, conn, settings)?;
        return Ok(ProbEstimate::exact(base.value / (m + 1) as f64));
    }
    if !shape.is_connected(conn) {
        return Err(Error::InvalidArgument("shape is not connected".into()));
    }
    let (sites, k) = event_sites(shape, conn)?;
    let n = sites.len();
    let t_idx = sites
        .iter()
        .position(|s| s == anchor)
        .expect("anchor in shape");
    let inner: Vec<usize> = (0..k)
        .filter(|&i| i != t_idx && conn.are_neighbors(&sites[i], anchor))
        .collect();
    debug_assert_eq!(inner.len(), m);
    if !model.is_gaussian() {
        return chi_squared_mc(model, &sites, settings, |v| {
            v[..k].iter().all(|&x| x > u)
                && v[k..].iter().all(|&x| x <= u)
                && inner.iter().all(|&i| v[t_idx] > v[i])
        });
    }
    let mut rows: Vec<(Vec<f64>, f64, f64)> = Vec::with_capacity(n + m);
    for i in 0..n {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        rows.push(if i < k {
            (c, u, f64::INFINITY)
        } else {
            (c, f64::NEG_INFINITY, u)
        });
    }
    for &i in &inner {
        let mut c = vec![0.0; n];
        c[t_idx] = 1.0;
        c[i] = -1.0;
        rows.push((c, 0.0, f64::INFINITY));
    }
    let mean: Vec<f64> = sites.iter().map(|s| mean_at(model, s)).collect();
    let cov = gaussian_layer_covariance(&sites, model)?;
    linear_constraint_probability(&mean, &cov, &rows, &settings.qmc)
}

/// P(X_t > u, X_t > max over neighbors of t).
pub fn peak_denominator(
    t: &Site,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &ProbabilitySettings,
) -> Result<ProbEstimate> {
    if t.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: t.dim(),
        });
    }
    let nbrs = neighbors(t, conn);
    let n_nb = nbrs.len();
    if model.is_white_noise() {
        let p = white_noise_p(u);
        return Ok(ProbEstimate::exact(
            (1.0 - p.powi(n_nb as i32 + 1)) / (n_nb + 1) as f64,
        ));
    }
    let mut sites = vec![t.clone()];
    sites.extend(nbrs.to_vec());
    if !model.is_gaussian() {
        return chi_squared_mc(model, &sites, settings, |v| {
            v[0] > u && v[1..].iter().all(|&x| v[0] > x)
        });
    }
    let n = sites.len();
    let mut rows = Vec::with_capacity(n);
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    rows.push((c, u, f64::INFINITY));
    for i in 1..n {
        let mut c = vec![0.0; n];
        c[0] = 1.0;
        c[i] = -1.0;
        rows.push((c, 0.0, f64::INFINITY));
    }
    let mean: Vec<f64> = sites.iter().map(|s| mean_at(model, s)).collect();
    let cov = gaussian_layer_covariance(&sites, model)?;
    linear_constraint_probability(&mean, &cov, &rows, &settings.qmc)
}
