//! Exact and peak-based cluster size distributions.
//!
//! w_k sums P(X_D > u, X_𝒩(D) ≤ u) over rooted shapes D of size k; the peak
//! variant w_k^peak(t) sums the same event joined with "t is a strict local
//! maximum" over shapes containing t.

mod chisq;
mod polynomial;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use chisq::{chi_squared_patch, PatchEstimates};
pub use polynomial::{
    wn_inside_polynomial, wn_partition_polynomial, wn_peak_denominator_polynomial,
    wn_peak_polynomial, wn_wk_polynomial, WnPolynomial,
};

use crate::empirical::{simulate_and_count, Estimator, SimulationPlan, TRACKED_TAILS};
use crate::error::{Error, Result};
use crate::fields::{gaussian_layer_covariance, mean_at, FieldModel};
use crate::lattice::{neighbors, Connectivity, Site, SiteSet, Window};
use crate::mvnprob::{
    excursion_probability, mvn_rectangle_with, peak_denominator, peak_event_probability,
    white_noise_p, ProbEstimate, ProbabilitySettings, RectangleProblem,
};
use crate::shapes::{
    containing_origin_from_rooted, enumerate_rooted_with_cap, group_by_origin_symmetry,
    group_by_rigid_motion, EnumerationCap, RootedShape,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationMode {
    ExactDenominator,
    Truncated,
    TruncatedPlusMcTail,
}

impl std::str::FromStr for NormalizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-denominator" | "exact" => Ok(NormalizationMode::ExactDenominator),
            "truncated" => Ok(NormalizationMode::Truncated),
            "truncated-plus-mc-tail" | "mc-tail" => Ok(NormalizationMode::TruncatedPlusMcTail),
            other => Err(Error::InvalidArgument(format!(
                "unknown normalization mode '{other}'"
            ))),
        }
    }
}

/// Simulation used for the tail mass Σ_{j>k_max} w_j (refined estimator).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    pub realizations: u64,
    pub window: Vec<usize>,
    pub subwindow: Vec<usize>,
    pub seed: u64,
}

impl TailConfig {
    pub fn default_for(dim: usize) -> Self {
        let (n, m) = match dim {
            1 => (1500, 750),
            2 => (100, 50),
            _ => (24, 12),
        };
        TailConfig {
            realizations: 15_000,
            window: vec![n; dim],
            subwindow: vec![m; dim],
            seed: 2024,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheorySettings {
    pub probability: ProbabilitySettings,
    /// Overrides the default enumeration cap for the dimension.
    pub cap: Option<EnumerationCap>,
    /// Evaluate one representative per congruence class (isotropic models).
    pub use_symmetry: bool,
    pub tail: Option<TailConfig>,
}

impl Default for TheorySettings {
    fn default() -> Self {
        TheorySettings {
            probability: ProbabilitySettings::default(),
            cap: None,
            use_symmetry: true,
            tail: None,
        }
    }
}

impl TheorySettings {
    fn cap(&self, dim: usize) -> EnumerationCap {
        self.cap.unwrap_or_else(|| EnumerationCap::default_for(dim))
    }
}

fn cap_error(e: Error, hint: &str) -> Error {
    match e {
        Error::CapExceeded { k, cap, dim } => {
            log::warn!(
                "k = {k} exceeds the enumeration cap {cap} in d = {dim}; use the {hint} estimator"
            );
            Error::CapExceeded { k, cap, dim }
        }
        other => other,
    }
}

fn rooted_shapes(
    k: usize,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
    hint: &str,
) -> Result<Vec<RootedShape>> {
    enumerate_rooted_with_cap(k, conn, model.dim(), settings.cap(model.dim()))
        .map_err(|e| cap_error(e, hint))
}

fn weighted_sum<F>(items: &[(SiteSet, usize)], eval: F) -> Result<ProbEstimate>
where
    F: Fn(&SiteSet) -> Result<ProbEstimate> + Sync,
{
    let parts: Vec<ProbEstimate> = items
        .par_iter()
        .map(|(shape, mult)| eval(shape).map(|e| e.scale(*mult as f64)))
        .collect::<Result<_>>()?;
    Ok(ProbEstimate::sum(&parts))
}

fn white_noise_value(poly: &WnPolynomial, u: f64) -> ProbEstimate {
    ProbEstimate::exact(poly.eval(white_noise_p(u)))
}

/// w_k for every k ≤ k_max (index k − 1).
pub fn wk_exact_all(
    k_max: usize,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<Vec<ProbEstimate>> {
    if !model.is_stationary() {
        return Err(Error::Unsupported(
            "w_k is only defined for stationary models; use the peak distribution at a fixed anchor".into(),
        ));
    }
    if let FieldModel::ChiSquared { .. } = model {
        let cap = settings.cap(model.dim());
        if k_max > cap.0 {
            return Err(cap_error(
                Error::CapExceeded {
                    k: k_max,
                    cap: cap.0,
                    dim: model.dim(),
                },
                "refined Monte-Carlo",
            ));
        }
        let p = &settings.probability;
        return Ok(chi_squared_patch(model, u, conn, k_max, p.mc_draws, p.mc_seed)?.rooted);
    }
    (1..=k_max)
        .map(|k| wk_exact(k, u, model, conn, settings))
        .collect()
}

/// w_k = Σ_{D rooted, |D| = k} P(X_D > u, X_𝒩(D) ≤ u).
pub fn wk_exact(
    k: usize,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<ProbEstimate> {
    if !model.is_stationary() {
        return Err(Error::Unsupported("w_k requires a stationary model".into()));
    }
    let dim = model.dim();
    if model.is_white_noise() {
        let poly = wn_wk_polynomial(k, conn, dim, settings.cap(dim))
            .map_err(|e| cap_error(e, "refined Monte-Carlo"))?;
        return Ok(white_noise_value(&poly, u));
    }
    if let FieldModel::ChiSquared { .. } = model {
        return Ok(wk_exact_all(k, u, model, conn, settings)?[k - 1]);
    }
    let shapes = rooted_shapes(k, model, conn, settings, "refined Monte-Carlo")?;
    let items: Vec<(SiteSet, usize)> = if settings.use_symmetry && model.is_isotropic() {
        group_by_rigid_motion(&shapes)?
            .into_iter()
            .map(|c| (c.representative.sites, c.multiplicity))
            .collect()
    } else {
        shapes.into_iter().map(|s| (s.sites, 1)).collect()
    };
    weighted_sum(&items, |d| {
        excursion_probability(d, u, model, conn, &settings.probability)
    })
}

/// w_k^inside = Σ over shapes of size k containing the origin.
pub fn wk_inside(
    k: usize,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<ProbEstimate> {
    if !model.is_stationary() {
        return Err(Error::Unsupported(
            "w_k^inside requires a stationary model".into(),
        ));
    }
    let dim = model.dim();
    if model.is_white_noise() {
        let poly = wn_inside_polynomial(k, conn, dim, settings.cap(dim))?;
        return Ok(white_noise_value(&poly, u));
    }
    if let FieldModel::ChiSquared { .. } = model {
        let p = &settings.probability;
        return Ok(chi_squared_patch(model, u, conn, k, p.mc_draws, p.mc_seed)?.inside[k - 1]);
    }
    let shapes = containing_origin_from_rooted(&rooted_shapes(
        k,
        model,
        conn,
        settings,
        "origin Monte-Carlo",
    )?);
    let items: Vec<(SiteSet, usize)> = if settings.use_symmetry && model.is_isotropic() {
        group_by_origin_symmetry(&shapes)?
            .into_iter()
            .map(|c| (c.representative.sites, c.multiplicity))
            .collect()
    } else {
        shapes.into_iter().map(|s| (s.sites, 1)).collect()
    };
    weighted_sum(&items, |d| {
        excursion_probability(d, u, model, conn, &settings.probability)
    })
}

/// The run {0, …, k−1}: P(X₋₁ ≤ u, X₀ > u, …, X_{k−1} > u, X_k ≤ u).
pub fn wk_1d(
    k: usize,
    u: f64,
    model: &FieldModel,
    settings: &TheorySettings,
) -> Result<ProbEstimate> {
    if model.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: model.dim(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "cluster size must be at least 1".into(),
        ));
    }
    let run = SiteSet::from_sites(1, (0..k as i64).map(|i| Site::new(vec![i])))?;
    excursion_probability(&run, u, model, Connectivity::Nearest, &settings.probability)
}

/// P(X₋₁ ≤ u, X₀ > u): the total rate of cluster roots in one dimension.
pub fn denominator_1d(
    u: f64,
    model: &FieldModel,
    settings: &TheorySettings,
) -> Result<ProbEstimate> {
    if model.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: model.dim(),
        });
    }
    if model.is_white_noise() {
        let p = white_noise_p(u);
        return Ok(ProbEstimate::exact(p * (1.0 - p)));
    }
    let sites = vec![Site::new(vec![-1]), Site::new(vec![0])];
    if !model.is_gaussian() {
        return crate::mvnprob::chi_squared_mc(model, &sites, &settings.probability, |v| {
            v[0] <= u && v[1] > u
        });
    }
    let problem = RectangleProblem::new(
        sites.iter().map(|s| mean_at(model, s)).collect(),
        gaussian_layer_covariance(&sites, model)?,
        vec![f64::NEG_INFINITY, u],
        vec![u, f64::INFINITY],
    )?;
    mvn_rectangle_with(&problem, &settings.probability.qmc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionKind {
    Exact,
    Peak,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub k: usize,
    pub w: f64,
    pub w_stderr: f64,
    pub mass: f64,
    pub mass_stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub kind: DistributionKind,
    pub u: f64,
    pub model: String,
    pub connectivity: Connectivity,
    pub dim: usize,
    pub anchor: Option<Site>,
    pub mode: NormalizationMode,
    pub k_max: usize,
    pub denominator: ProbEstimate,
    /// Estimated Σ_{j > k_max} w_j when the mode adds a Monte-Carlo tail.
    pub tail: Option<ProbEstimate>,
    pub rows: Vec<DistributionRow>,
}

impl DistributionTable {
    fn assemble(
        kind: DistributionKind,
        u: f64,
        model: &FieldModel,
        conn: Connectivity,
        anchor: Option<Site>,
        mode: NormalizationMode,
        ws: &[ProbEstimate],
        denominator: ProbEstimate,
        tail: Option<ProbEstimate>,
    ) -> Self {
        let d = denominator.value;
        let rows = ws
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let mass = if d > 0.0 { w.value / d } else { 0.0 };
                let rel_w = if w.value > 0.0 {
                    w.stderr / w.value
                } else {
                    0.0
                };
                let rel_d = if d > 0.0 { denominator.stderr / d } else { 0.0 };
                let mass_stderr = if w.value > 0.0 {
                    mass * (rel_w * rel_w + rel_d * rel_d).sqrt()
                } else if d > 0.0 {
                    w.stderr / d
                } else {
                    0.0
                };
                DistributionRow {
                    k: i + 1,
                    w: w.value,
                    w_stderr: w.stderr,
                    mass,
                    mass_stderr,
                }
            })
            .collect();
        DistributionTable {
            kind,
            u,
            model: model.name(),
            connectivity: conn,
            dim: model.dim(),
            anchor,
            mode,
            k_max: ws.len(),
            denominator,
            tail,
            rows,
        }
    }

    pub fn row(&self, k: usize) -> Option<&DistributionRow> {
        self.rows.get(k.wrapping_sub(1))
    }

    pub fn w(&self, k: usize) -> f64 {
        self.row(k).map_or(0.0, |r| r.w)
    }

    pub fn mass(&self, k: usize) -> f64 {
        self.row(k).map_or(0.0, |r| r.mass)
    }

    pub fn masses(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mass).collect()
    }

    pub fn total_w(&self) -> f64 {
        self.rows.iter().map(|r| r.w).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.rows.iter().map(|r| r.mass).sum()
    }

    /// Masses rescaled to sum to one over the rows present.
    pub fn renormalized(&self) -> Vec<f64> {
        let total = self.total_mass();
        self.rows
            .iter()
            .map(|r| if total > 0.0 { r.mass / total } else { 0.0 })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,w,mass,stderr\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:.10e},{:.10e},{:.4e}\n",
                r.k, r.w, r.mass, r.w_stderr
            ));
        }
        s
    }

    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("k,mass\n");
        for r in &self.rows {
            s.push_str(&format!("{},{:.10e}\n", r.k, r.mass));
        }
        s
    }
}

/// P(S_u = k) for k ≤ k_max under the chosen normalization.
pub fn cluster_size_distribution(
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    k_max: usize,
    mode: NormalizationMode,
    settings: &TheorySettings,
) -> Result<DistributionTable> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if !model.is_stationary() {
        return Err(Error::Unsupported(
            "a global cluster size distribution is not defined for nonstationary fields; use the peak distribution"
                .into(),
        ));
    }
    let dim = model.dim();
    let ws: Vec<ProbEstimate> = if dim == 1 && !matches!(model, FieldModel::ChiSquared { .. }) {
        (1..=k_max)
            .map(|k| wk_1d(k, u, model, settings))
            .collect::<Result<_>>()?
    } else {
        wk_exact_all(k_max, u, model, conn, settings)?
    };
    let truncated = ProbEstimate::sum(&ws);
    let (denominator, tail) = match mode {
        NormalizationMode::ExactDenominator => {
            if dim != 1 {
                return Err(Error::Unsupported(
                    "the exact denominator is only available in one dimension; use truncated or truncated-plus-mc-tail"
                        .into(),
                ));
            }
            (denominator_1d(u, model, settings)?, None)
        }
        NormalizationMode::Truncated => (truncated, None),
        NormalizationMode::TruncatedPlusMcTail => {
            let tail = mc_tail(k_max, u, model, conn, settings)?;
            (ProbEstimate::sum(&[truncated, tail]), Some(tail))
        }
    };
    Ok(DistributionTable::assemble(
        DistributionKind::Exact,
        u,
        model,
        conn,
        None,
        mode,
        &ws,
        denominator,
        tail,
    ))
}

fn mc_tail(
    k_max: usize,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<ProbEstimate> {
    if k_max > TRACKED_TAILS {
        return Err(Error::InvalidArgument(format!(
            "tail estimation supports k_max ≤ {TRACKED_TAILS}"
        )));
    }
    let dim = model.dim();
    let cfg = settings
        .tail
        .clone()
        .unwrap_or_else(|| TailConfig::default_for(dim));
    let window = Window::from_extents(&cfg.window, true)?;
    let sub = Window::from_extents(&cfg.subwindow, true)?;
    let plan = SimulationPlan::new(model.clone(), window, u, conn, cfg.realizations, cfg.seed)
        .with_subwindow(sub);
    let result = simulate_and_count(&plan)?.result(Estimator::McRefined)?;
    let (value, stderr) = result.tail_beyond(k_max).expect("tracked tail");
    Ok(ProbEstimate {
        value,
        stderr,
        method: crate::mvnprob::Method::MonteCarlo,
        evaluations: cfg.realizations,
        converged: true,
    })
}

fn check_anchor(anchor: &Site, model: &FieldModel) -> Result<()> {
    if anchor.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: anchor.dim(),
        });
    }
    Ok(())
}

/// w_k^peak(t) for every k ≤ k_max (index k − 1).
pub fn wk_peak_all(
    k_max: usize,
    anchor: &Site,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<Vec<ProbEstimate>> {
    check_anchor(anchor, model)?;
    if let FieldModel::ChiSquared { .. } = model {
        let p = &settings.probability;
        return Ok(chi_squared_patch(model, u, conn, k_max, p.mc_draws, p.mc_seed)?.peak);
    }
    (1..=k_max)
        .map(|k| wk_peak(k, anchor, u, model, conn, settings))
        .collect()
}

/// w_k^peak(t): probability that t is a local maximum above u whose cluster
/// has size k.
pub fn wk_peak(
    k: usize,
    anchor: &Site,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<ProbEstimate> {
    check_anchor(anchor, model)?;
    let dim = model.dim();
    if model.is_white_noise() {
        let poly = wn_peak_polynomial(k, conn, dim, settings.cap(dim))
            .map_err(|e| cap_error(e, "peak Monte-Carlo"))?;
        return Ok(white_noise_value(&poly, u));
    }
    if let FieldModel::ChiSquared { .. } = model {
        return Ok(wk_peak_all(k, anchor, u, model, conn, settings)?[k - 1]);
    }
    let shapes = containing_origin_from_rooted(&rooted_shapes(
        k,
        model,
        conn,
        settings,
        "peak Monte-Carlo",
    )?);
    let origin = Site::origin(dim);
    if model.is_stationary() {
        let items: Vec<(SiteSet, usize)> = if settings.use_symmetry && model.is_isotropic() {
            group_by_origin_symmetry(&shapes)?
                .into_iter()
                .map(|c| (c.representative.sites, c.multiplicity))
                .collect()
        } else {
            shapes.into_iter().map(|s| (s.sites, 1)).collect()
        };
        weighted_sum(&items, |d| {
            peak_event_probability(d, &origin, u, model, conn, &settings.probability)
        })
    } else {
        let items: Vec<(SiteSet, usize)> = shapes
            .into_iter()
            .map(|s| (s.sites.translate(anchor), 1))
            .collect();
        weighted_sum(&items, |d| {
            peak_event_probability(d, anchor, u, model, conn, &settings.probability)
        })
    }
}

/// Peak denominator at t; white noise uses the exact polynomial.
pub fn peak_denominator_at(
    anchor: &Site,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<ProbEstimate> {
    check_anchor(anchor, model)?;
    if model.is_white_noise() {
        let n = neighbors(anchor, conn).len();
        return Ok(white_noise_value(&wn_peak_denominator_polynomial(n), u));
    }
    peak_denominator(anchor, u, model, conn, &settings.probability)
}

/// P(S_u^peak(t) = k) for k ≤ k_max over the exact peak denominator.
pub fn peak_cluster_size_distribution(
    anchor: &Site,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    k_max: usize,
    settings: &TheorySettings,
) -> Result<DistributionTable> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    check_anchor(anchor, model)?;
    let (ws, denominator) = if let FieldModel::ChiSquared { .. } = model {
        let p = &settings.probability;
        let est = chi_squared_patch(model, u, conn, k_max, p.mc_draws, p.mc_seed)?;
        (est.peak, est.peak_denominator)
    } else {
        (
            wk_peak_all(k_max, anchor, u, model, conn, settings)?,
            peak_denominator_at(anchor, u, model, conn, settings)?,
        )
    };
    Ok(DistributionTable::assemble(
        DistributionKind::Peak,
        u,
        model,
        conn,
        Some(anchor.clone()),
        NormalizationMode::ExactDenominator,
        &ws,
        denominator,
        None,
    ))
}

/// The k split terms of the one-dimensional peak numerator: term j has j
/// cluster sites to the right of t and k − 1 − j to the left.
pub fn peak_terms_1d(
    k: usize,
    t: i64,
    u: f64,
    model: &FieldModel,
    settings: &TheorySettings,
) -> Result<Vec<ProbEstimate>> {
    if model.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: model.dim(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "cluster size must be at least 1".into(),
        ));
    }
    let anchor = Site::new(vec![t]);
    (0..k as i64)
        .map(|j| {
            let left = k as i64 - 1 - j;
            let run = SiteSet::from_sites(1, (t - left..=t + j).map(|i| Site::new(vec![i])))?;
            peak_event_probability(
                &run,
                &anchor,
                u,
                model,
                Connectivity::Nearest,
                &settings.probability,
            )
        })
        .collect()
}

/// One-dimensional peak distribution assembled from the split terms.
pub fn peak_csd_1d(
    t: i64,
    u: f64,
    model: &FieldModel,
    k_max: usize,
    settings: &TheorySettings,
) -> Result<DistributionTable> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let anchor = Site::new(vec![t]);
    let ws: Vec<ProbEstimate> = (1..=k_max)
        .map(|k| peak_terms_1d(k, t, u, model, settings).map(|terms| ProbEstimate::sum(&terms)))
        .collect::<Result<_>>()?;
    let denominator = peak_denominator_at(&anchor, u, model, Connectivity::Nearest, settings)?;
    Ok(DistributionTable::assemble(
        DistributionKind::Peak,
        u,
        model,
        Connectivity::Nearest,
        Some(anchor),
        NormalizationMode::ExactDenominator,
        &ws,
        denominator,
        None,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InsideReport {
    pub k: usize,
    pub w: ProbEstimate,
    pub inside: ProbEstimate,
    /// w_k^inside − k w_k.
    pub difference: f64,
    pub joint_stderr: f64,
    pub consistent: bool,
}

/// Checks w_k^inside = k w_k; exact for white noise, 3 joint stderr otherwise.
pub fn inside_consistency(
    k: usize,
    u: f64,
    model: &FieldModel,
    conn: Connectivity,
    settings: &TheorySettings,
) -> Result<InsideReport> {
    if !model.is_stationary() {
        return Err(Error::Unsupported(
            "the inside relation needs a stationary model".into(),
        ));
    }
    let dim = model.dim();
    if model.is_white_noise() {
        let cap = settings.cap(dim);
        let w = wn_wk_polynomial(k, conn, dim, cap)?;
        let inside = wn_inside_polynomial(k, conn, dim, cap)?;
        let k_times_w = w.scale(num_rational::Rational64::from_integer(k as i64));
        let p = white_noise_p(u);
        let difference = inside.eval(p) - k_times_w.eval(p);
        return Ok(InsideReport {
            k,
            w: ProbEstimate::exact(w.eval(p)),
            inside: ProbEstimate::exact(inside.eval(p)),
            difference,
            joint_stderr: 0.0,
            consistent: inside == k_times_w,
        });
    }
    let (w, inside) = if let FieldModel::ChiSquared { .. } = model {
        let p = &settings.probability;
        let est = chi_squared_patch(model, u, conn, k, p.mc_draws, p.mc_seed)?;
        (est.rooted[k - 1], est.inside[k - 1])
    } else {
        (
            wk_exact(k, u, model, conn, settings)?,
            wk_inside(k, u, model, conn, settings)?,
        )
    };
    let difference = inside.value - k as f64 * w.value;
    let joint_stderr = (inside.stderr.powi(2) + (k as f64 * w.stderr).powi(2)).sqrt();
    Ok(InsideReport {
        k,
        w,
        inside,
        difference,
        joint_stderr,
        consistent: difference.abs() <= 3.0 * joint_stderr,
    })
}

/// Total-variation distance ½ Σ |a_k − b_k| between two mass vectors.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|i| (at(a, i) - at(b, i)).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::CovarianceKernel;
    use crate::mvnprob::white_noise_q;

    fn wn(dim: usize) -> FieldModel {
        FieldModel::WhiteNoise { dim }
    }

    #[test]
    fn geometric_law() {
        let s = TheorySettings::default();
        let t = cluster_size_distribution(
            0.5,
            &wn(1),
            Connectivity::Nearest,
            10,
            NormalizationMode::ExactDenominator,
            &s,
        )
        .unwrap();
        let (p, q) = (white_noise_p(0.5), white_noise_q(0.5));
        for k in 1..=10 {
            assert!((t.mass(k) - p * q.powi(k as i32 - 1)).abs() < 1e-15);
        }
        for k in 1..10 {
            assert!((t.mass(k + 1) / t.mass(k) - q).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_denominator_rejected_in_two_dimensions() {
        let s = TheorySettings::default();
        let e = cluster_size_distribution(
            0.5,
            &wn(2),
            Connectivity::Nearest,
            3,
            NormalizationMode::ExactDenominator,
            &s,
        );
        assert!(matches!(e, Err(Error::Unsupported(_))));
    }

    #[test]
    fn white_noise_peak_1d() {
        let s = TheorySettings::default();
        let (p, q) = (white_noise_p(0.5), white_noise_q(0.5));
        let t = peak_csd_1d(0, 0.5, &wn(1), 5, &s).unwrap();
        let denom = (1.0 - p.powi(3)) / 3.0;
        assert!((t.denominator.value - denom).abs() < 1e-15);
        assert!((t.w(1) - p * p * q).abs() < 1e-15);
        for k in 2..=5 {
            let want = (k as f64 + 1.0) * p * p * q.powi(k as i32) / 3.0;
            assert!((t.w(k) - want).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn peak_singleton_equals_singleton_cluster() {
        let s = TheorySettings::default();
        for conn in [Connectivity::Nearest, Connectivity::Moore] {
            let o = Site::origin(2);
            let a = wk_peak(1, &o, 1.0, &wn(2), conn, &s).unwrap().value;
            let b = wk_exact(1, 1.0, &wn(2), conn, &s).unwrap().value;
            let c = wk_inside(1, 1.0, &wn(2), conn, &s).unwrap().value;
            assert_eq!(a, b);
            assert_eq!(b, c);
        }
    }

    #[test]
    fn symmetry_reduction_matches_shapewise() {
        let model = FieldModel::StationaryGaussian {
            kernel: CovarianceKernel::unit_squared_exponential(),
            dim: 2,
        };
        let with = TheorySettings::default();
        let without = TheorySettings {
            use_symmetry: false,
            ..TheorySettings::default()
        };
        let a = wk_exact(3, 1.5, &model, Connectivity::Nearest, &with).unwrap();
        let b = wk_exact(3, 1.5, &model, Connectivity::Nearest, &without).unwrap();
        let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.value - b.value).abs() <= 3.0 * se + 1e-9, "{a:?} {b:?}");
    }

    #[test]
    fn nonstationary_exact_is_unsupported() {
        let model = FieldModel::preset("cos-nonstat-1d").unwrap();
        let s = TheorySettings::default();
        assert!(matches!(
            cluster_size_distribution(
                0.5,
                &model,
                Connectivity::Nearest,
                3,
                NormalizationMode::Truncated,
                &s
            ),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn table_masses_are_ratios() {
        let s = TheorySettings::default();
        let t = cluster_size_distribution(
            1.0,
            &wn(2),
            Connectivity::Moore,
            3,
            NormalizationMode::Truncated,
            &s,
        )
        .unwrap();
        assert!((t.total_mass() - 1.0).abs() < 1e-12);
        for r in &t.rows {
            assert!((r.mass - r.w / t.denominator.value).abs() < 1e-12);
        }
        let renorm: f64 = t.renormalized().iter().sum();
        assert!((renorm - 1.0).abs() < 1e-12);
        assert!(t.to_csv().starts_with("k,w,mass,stderr\n"));
    }

    #[test]
    fn cap_is_enforced() {
        let s = TheorySettings {
            cap: Some(EnumerationCap(3)),
            ..TheorySettings::default()
        };
        assert!(matches!(
            wk_exact(4, 1.0, &wn(2), Connectivity::Nearest, &s),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn tv_distance() {
        assert_eq!(total_variation(&[0.5, 0.5], &[1.0]), 0.5);
    }
}
