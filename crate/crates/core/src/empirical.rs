//! Simulation-based estimates of w_k, w_k^peak and their sums.
//!
//! One labeling pass per realization feeds every estimator at once:
//!
//! * `direct`: size-k clusters per window site,
//! * `direct-peak`: interior local maxima whose cluster has size k, per
//!   interior site,
//! * `mc-origin`: size-k clusters containing the origin and not touching the
//!   window boundary, divided by k,
//! * `mc-refined`: clusters not touching the boundary that meet an interior
//!   subwindow in x sites, weighted x/k, per subwindow site,
//! * `mc-peak`: local maxima inside the subwindow with a size-k cluster that
//!   does not touch the boundary, per subwindow site,
//! * `nonstat-peak`: local maxima at even interior sites, per even interior
//!   site.
//!
//! Realizations are processed in fixed index chunks and merged in chunk
//! order, so results do not depend on thread scheduling.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{FieldModel, MeanFunction, Simulator};
use crate::lattice::{
    advance, label_components, on_boundary, peak_indices, Connectivity, Site, Window, UNLABELED,
};

/// Largest k for which per-realization tail sums are tracked.
pub const TRACKED_TAILS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    IncludeAll,
    ExcludeTouching,
}

impl std::str::FromStr for BoundaryPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "include-all" => Ok(BoundaryPolicy::IncludeAll),
            "exclude-touching" => Ok(BoundaryPolicy::ExcludeTouching),
            other => Err(Error::InvalidArgument(format!(
                "unknown boundary policy '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Direct,
    DirectPeak,
    McOrigin,
    McRefined,
    McPeak,
    NonstatPeak,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Direct => "direct",
            Estimator::DirectPeak => "direct-peak",
            Estimator::McOrigin => "mc-origin",
            Estimator::McRefined => "mc-refined",
            Estimator::McPeak => "mc-peak",
            Estimator::NonstatPeak => "nonstat-peak",
        }
    }

    const ALL: [Estimator; 6] = [
        Estimator::Direct,
        Estimator::DirectPeak,
        Estimator::McOrigin,
        Estimator::McRefined,
        Estimator::McPeak,
        Estimator::NonstatPeak,
    ];

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown estimator '{s}'")))
    }
}

/// Everything needed to reproduce a batch of realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationPlan {
    pub model: FieldModel,
    pub window: Window,
    pub subwindow: Option<Window>,
    pub u: f64,
    pub connectivity: Connectivity,
    pub realizations: u64,
    pub seed: u64,
    pub policy: BoundaryPolicy,
}

impl SimulationPlan {
    pub fn new(
        model: FieldModel,
        window: Window,
        u: f64,
        conn: Connectivity,
        realizations: u64,
        seed: u64,
    ) -> Self {
        SimulationPlan {
            model,
            window,
            subwindow: None,
            u,
            connectivity: conn,
            realizations,
            seed,
            policy: BoundaryPolicy::IncludeAll,
        }
    }

    pub fn with_subwindow(mut self, sub: Window) -> Self {
        self.subwindow = Some(sub);
        self
    }

    pub fn with_policy(mut self, policy: BoundaryPolicy) -> Self {
        self.policy = policy;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidArgument(
                "at least one realization is required".into(),
            ));
        }
        if self.window.dim() != self.model.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.model.dim(),
                got: self.window.dim(),
            });
        }
        if let Some(sub) = &self.subwindow {
            if !self.window.strictly_contains(sub) {
                return Err(Error::SubwindowOutside);
            }
        }
        Ok(())
    }
}

/// Per-k sums over realizations of an integer per-realization statistic.
#[derive(Clone, Debug, Default, PartialEq)]
struct Accumulator {
    sum: Vec<u64>,
    sumsq: Vec<u128>,
    /// Tail contributions: index K holds the sum over k > K of the
    /// per-realization weight (count, or x/k for the refined estimator).
    tail_sum: Vec<f64>,
    tail_sumsq: Vec<f64>,
    excluded: u64,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            sum: Vec::new(),
            sumsq: Vec::new(),
            tail_sum: vec![0.0; TRACKED_TAILS + 1],
            tail_sumsq: vec![0.0; TRACKED_TAILS + 1],
            excluded: 0,
        }
    }

    fn add(&mut self, per_k: &[u64], weighted: bool) {
        if self.sum.len() < per_k.len() {
            self.sum.resize(per_k.len(), 0);
            self.sumsq.resize(per_k.len(), 0);
        }
        for (k, &v) in per_k.iter().enumerate() {
            self.sum[k] += v;
            self.sumsq[k] += u128::from(v) * u128::from(v);
        }
        // tails: suffix sums of the per-realization weights
        let weight = |k: usize| {
            if weighted && k > 0 {
                per_k[k] as f64 / k as f64
            } else {
                per_k[k] as f64
            }
        };
        let mut suffix = 0.0;
        let mut tails = [0.0; TRACKED_TAILS + 1];
        for k in (1..per_k.len()).rev() {
            suffix += weight(k);
            if k - 1 <= TRACKED_TAILS {
                tails[k - 1] = suffix;
            }
        }
        for (k, t) in tails.iter().enumerate() {
            self.tail_sum[k] += t;
            self.tail_sumsq[k] += t * t;
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        if self.sum.len() < other.sum.len() {
            self.sum.resize(other.sum.len(), 0);
            self.sumsq.resize(other.sum.len(), 0);
        }
        for k in 0..other.sum.len() {
            self.sum[k] += other.sum[k];
            self.sumsq[k] += other.sumsq[k];
        }
        for k in 0..=TRACKED_TAILS {
            self.tail_sum[k] += other.tail_sum[k];
            self.tail_sumsq[k] += other.tail_sumsq[k];
        }
        self.excluded += other.excluded;
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Tally {
    realizations: u64,
    per: Vec<Accumulator>,
    /// Direct estimator under the other boundary policy is kept alongside.
    direct_excluding: Accumulator,
    exceedance_sites: u64,
    ties: u64,
}

impl Tally {
    fn new() -> Self {
        Tally {
            realizations: 0,
            per: (0..Estimator::ALL.len())
                .map(|_| Accumulator::new())
                .collect(),
            direct_excluding: Accumulator::new(),
            exceedance_sites: 0,
            ties: 0,
        }
    }

    fn merge(&mut self, other: &Tally) {
        self.realizations += other.realizations;
        for (a, b) in self.per.iter_mut().zip(&other.per) {
            a.merge(b);
        }
        self.direct_excluding.merge(&other.direct_excluding);
        self.exceedance_sites += other.exceedance_sites;
        self.ties += other.ties;
    }
}

/// Precomputed window geometry shared by every realization.
struct Geometry {
    origin: Option<usize>,
    sub_indices: Vec<usize>,
    in_sub: Vec<bool>,
    even_interior: Vec<bool>,
    even_interior_count: usize,
    interior_count: usize,
}

impl Geometry {
    fn new(plan: &SimulationPlan) -> Self {
        let w = &plan.window;
        let n = w.len();
        let extents = w.extents();
        let mut in_sub = vec![false; n];
        let mut sub_indices = Vec::new();
        if let Some(sub) = &plan.subwindow {
            for s in sub.sites() {
                let i = w.index_of(&s).expect("subwindow inside window");
                in_sub[i] = true;
                sub_indices.push(i);
            }
        }
        let mut even_interior = vec![false; n];
        let mut count = 0;
        let mut local = vec![0usize; extents.len()];
        for flag in even_interior.iter_mut() {
            let coord_sum: i64 = local.iter().zip(w.lo()).map(|(&c, &l)| c as i64 + l).sum();
            if coord_sum.rem_euclid(2) == 0 && !on_boundary(&local, &extents) {
                *flag = true;
                count += 1;
            }
            advance(&mut local, &extents);
        }
        let interior_count = if extents.iter().any(|&e| e < 3) {
            0
        } else {
            extents.iter().map(|&e| e - 2).product()
        };
        Geometry {
            origin: w.index_of(&Site::origin(w.dim())),
            interior_count,
            sub_indices,
            in_sub,
            even_interior,
            even_interior_count: count,
        }
    }
}

fn bump(v: &mut Vec<u64>, k: usize, by: u64) {
    if v.len() <= k {
        v.resize(k + 1, 0);
    }
    v[k] += by;
}

fn count_realization(plan: &SimulationPlan, geo: &Geometry, values: &[f64], tally: &mut Tally) {
    let conn = plan.connectivity;
    let above: Vec<bool> = values.iter().map(|&v| v > plan.u).collect();
    let lab = label_components(&plan.window, &above, conn);
    let mut per: Vec<Vec<u64>> = vec![Vec::new(); Estimator::ALL.len()];
    let mut direct_ex = Vec::new();
    let mut excluded = [0u64; 6];

    tally.exceedance_sites += above.iter().filter(|&&b| b).count() as u64;
    for (size, &touch) in lab.sizes.iter().zip(&lab.touches_boundary) {
        bump(&mut per[Estimator::Direct.slot()], *size, 1);
        if touch {
            tally.direct_excluding.excluded += 1;
        } else {
            bump(&mut direct_ex, *size, 1);
        }
    }

    let (peaks, ties) = peak_indices(&plan.window, values, plan.u, conn);
    tally.ties += ties as u64;
    for &i in &peaks {
        let l = lab.labels[i] as usize;
        let size = lab.sizes[l];
        bump(&mut per[Estimator::DirectPeak.slot()], size, 1);
        if geo.in_sub[i] {
            if lab.touches_boundary[l] {
                excluded[Estimator::McPeak.slot()] += 1;
            } else {
                bump(&mut per[Estimator::McPeak.slot()], size, 1);
            }
        }
        if geo.even_interior[i] {
            bump(&mut per[Estimator::NonstatPeak.slot()], size, 1);
        }
    }

    if let Some(o) = geo.origin {
        if lab.labels[o] != UNLABELED {
            let l = lab.labels[o] as usize;
            if lab.touches_boundary[l] {
                excluded[Estimator::McOrigin.slot()] += 1;
            } else {
                bump(&mut per[Estimator::McOrigin.slot()], lab.sizes[l], 1);
            }
        }
    }

    if !geo.sub_indices.is_empty() {
        // x = number of subwindow sites of each cluster
        let mut hits: Vec<(u32, u64)> = Vec::new();
        let mut slot_of = std::collections::HashMap::new();
        for &i in &geo.sub_indices {
            let l = lab.labels[i];
            if l != UNLABELED {
                let e = slot_of.entry(l).or_insert_with(|| {
                    hits.push((l, 0));
                    hits.len() - 1
                });
                hits[*e].1 += 1;
            }
        }
        for (l, x) in hits {
            let l = l as usize;
            if lab.touches_boundary[l] {
                excluded[Estimator::McRefined.slot()] += 1;
            } else {
                bump(&mut per[Estimator::McRefined.slot()], lab.sizes[l], x);
            }
        }
    }

    tally.realizations += 1;
    for e in Estimator::ALL {
        let acc = &mut tally.per[e.slot()];
        acc.add(
            &per[e.slot()],
            e == Estimator::McRefined || e == Estimator::McOrigin,
        );
        acc.excluded += excluded[e.slot()];
    }
    tally.direct_excluding.add(&direct_ex, false);
}

fn run_range(
    plan: &SimulationPlan,
    sim: &Simulator,
    geo: &Geometry,
    range: std::ops::Range<u64>,
) -> Tally {
    let chunk_size = 16u64;
    let starts: Vec<u64> = range.clone().step_by(chunk_size as usize).collect();
    let partial: Vec<Tally> = starts
        .into_par_iter()
        .map(|start| {
            let mut tally = Tally::new();
            let mut values = Vec::with_capacity(plan.window.len());
            for idx in start..(start + chunk_size).min(range.end) {
                sim.fill(plan.seed, idx, &mut values);
                count_realization(plan, geo, &values, &mut tally);
            }
            tally
        })
        .collect();
    let mut total = Tally::new();
    for t in &partial {
        total.merge(t);
    }
    total
}

/// Aggregated tallies of one simulation plan.
#[derive(Clone, Debug)]
pub struct EmpiricalSummary {
    pub plan: SimulationPlan,
    tally: Tally,
    geometry_even_sites: usize,
    geometry_interior_sites: usize,
}

/// Simulates all realizations of the plan and tallies every estimator.
pub fn simulate_and_count(plan: &SimulationPlan) -> Result<EmpiricalSummary> {
    simulate_streaming(plan, plan.realizations, |_| {})
}

/// Like [`simulate_and_count`], calling `on_batch` with the partial summary
/// after every `every` realizations.
pub fn simulate_streaming<F>(
    plan: &SimulationPlan,
    every: u64,
    mut on_batch: F,
) -> Result<EmpiricalSummary>
where
    F: FnMut(&EmpiricalSummary),
{
    plan.validate()?;
    let sim = Simulator::new(&plan.model, &plan.window)?;
    let geo = Geometry::new(plan);
    let every = every.max(1);
    let mut summary = EmpiricalSummary {
        plan: plan.clone(),
        tally: Tally::new(),
        geometry_even_sites: geo.even_interior_count,
        geometry_interior_sites: geo.interior_count,
    };
    let mut start = 0;
    while start < plan.realizations {
        let end = (start + every).min(plan.realizations);
        let part = run_range(plan, &sim, &geo, start..end);
        summary.tally.merge(&part);
        start = end;
        if start < plan.realizations {
            on_batch(&summary);
        }
    }
    on_batch(&summary);
    if summary.tally.ties > 0 {
        log::warn!(
            "{} exact ties among local-maximum candidates; strict maxima exclude them",
            summary.tally.ties
        );
    }
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub k: usize,
    /// Raw count (for mc-refined, the integer sum of intersection sizes x).
    pub count: u64,
    pub estimate: f64,
    pub stderr: f64,
}

/// Estimates of one estimator with the metadata that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingResult {
    pub estimator: Estimator,
    pub model: String,
    pub u: f64,
    pub connectivity: Connectivity,
    pub seed: u64,
    pub policy: BoundaryPolicy,
    pub realizations: u64,
    pub window: Window,
    pub window_sites: usize,
    pub subwindow: Option<Window>,
    pub subwindow_sites: Option<usize>,
    /// Sites per realization in the denominator.
    pub normalizer_sites: usize,
    /// Clusters (or peaks) dropped for touching the window boundary.
    pub boundary_excluded: u64,
    /// Exact ties seen among local-maximum candidates.
    pub ties: u64,
    pub rows: Vec<CountRow>,
    pub total_estimate: f64,
    pub total_stderr: f64,
    /// Sum of ŵ_j for j > k, with standard error, for k = 0..=TRACKED_TAILS.
    pub tails: Vec<(f64, f64)>,
}

impl CountingResult {
    pub fn row(&self, k: usize) -> Option<&CountRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    /// ŵ_k, zero when no size-k event was observed.
    pub fn estimate(&self, k: usize) -> f64 {
        self.row(k).map_or(0.0, |r| r.estimate)
    }

    pub fn stderr(&self, k: usize) -> f64 {
        self.row(k).map_or(0.0, |r| r.stderr)
    }

    /// Σ_{j > k} ŵ_j with its standard error.
    pub fn tail_beyond(&self, k: usize) -> Option<(f64, f64)> {
        self.tails.get(k).copied()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,count,estimate,stderr\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{:.8e},{:.8e}\n",
                r.k, r.count, r.estimate, r.stderr
            ));
        }
        s
    }
}

fn sd_of_mean(sum: f64, sumsq: f64, m: u64) -> f64 {
    if m < 2 {
        return 0.0;
    }
    let mf = m as f64;
    let mean = sum / mf;
    let var = ((sumsq - mf * mean * mean) / (mf - 1.0)).max(0.0);
    (var / mf).sqrt()
}

impl EmpiricalSummary {
    pub fn realizations(&self) -> u64 {
        self.tally.realizations
    }

    pub fn exceedance_sites(&self) -> u64 {
        self.tally.exceedance_sites
    }

    pub fn ties(&self) -> u64 {
        self.tally.ties
    }

    /// Number of even interior sites (the anchor set for the nonstationary
    /// peak estimator).
    pub fn even_interior_sites(&self) -> usize {
        self.geometry_even_sites
    }

    pub fn result(&self, estimator: Estimator) -> Result<CountingResult> {
        let plan = &self.plan;
        let window_sites = plan.window.len();
        let sub_sites = plan.subwindow.as_ref().map(Window::len);
        let normalizer_sites = match estimator {
            Estimator::Direct => window_sites,
            Estimator::DirectPeak => self.geometry_interior_sites.max(1),
            Estimator::McOrigin => {
                let o = Site::origin(plan.window.dim());
                if !plan.window.contains(&o) {
                    return Err(Error::InvalidArgument(
                        "origin lies outside the window".into(),
                    ));
                }
                1
            }
            Estimator::McRefined | Estimator::McPeak => sub_sites
                .ok_or_else(|| Error::InvalidArgument(format!("{estimator} needs a subwindow")))?,
            Estimator::NonstatPeak => {
                if !matches!(
                    plan.model,
                    FieldModel::NonstationaryGaussian {
                        mean: MeanFunction::CosPi,
                        ..
                    }
                ) {
                    return Err(Error::InvalidArgument(
                        "nonstat-peak requires the cos-mean model".into(),
                    ));
                }
                self.geometry_even_sites
            }
        };
        let acc = match (estimator, plan.policy) {
            (Estimator::Direct, BoundaryPolicy::ExcludeTouching) => &self.tally.direct_excluding,
            _ => &self.tally.per[estimator.slot()],
        };
        let m = self.tally.realizations;
        let weighted = matches!(estimator, Estimator::McRefined | Estimator::McOrigin);
        let mut rows = Vec::new();
        for k in 1..acc.sum.len() {
            if acc.sum[k] == 0 {
                continue;
            }
            let per_real = if weighted {
                (k * normalizer_sites) as u128
            } else {
                normalizer_sites as u128
            };
            let denom = per_real * u128::from(m);
            let estimate = acc.sum[k] as f64 / denom as f64;
            let stderr = sd_of_mean(acc.sum[k] as f64, acc.sumsq[k] as f64, m) / per_real as f64;
            rows.push(CountRow {
                k,
                count: acc.sum[k],
                estimate,
                stderr,
            });
        }
        let norm = (normalizer_sites as f64) * m as f64;
        let tails: Vec<(f64, f64)> = (0..=TRACKED_TAILS)
            .map(|k| {
                (
                    acc.tail_sum[k] / norm,
                    sd_of_mean(acc.tail_sum[k], acc.tail_sumsq[k], m) / normalizer_sites as f64,
                )
            })
            .collect();
        let (total_estimate, total_stderr) = tails[0];
        Ok(CountingResult {
            estimator,
            model: plan.model.name(),
            u: plan.u,
            connectivity: plan.connectivity,
            seed: plan.seed,
            policy: plan.policy,
            realizations: m,
            window: plan.window.clone(),
            window_sites,
            subwindow: plan.subwindow.clone(),
            subwindow_sites: sub_sites,
            normalizer_sites,
            boundary_excluded: if estimator == Estimator::Direct
                && plan.policy == BoundaryPolicy::IncludeAll
            {
                0
            } else if estimator == Estimator::Direct {
                self.tally.direct_excluding.excluded
            } else {
                acc.excluded
            },
            ties: self.tally.ties,
            rows,
            total_estimate,
            total_stderr,
            tails,
        })
    }
}

/// ŵ_k = #{size-k clusters} / (M N^d).
pub fn empirical_wk(plan: &SimulationPlan) -> Result<CountingResult> {
    simulate_and_count(plan)?.result(Estimator::Direct)
}

/// ŵ_k^peak = #{interior local maxima above u with a size-k cluster} / (M (N − 2)^d).
pub fn empirical_peak_wk(plan: &SimulationPlan) -> Result<CountingResult> {
    simulate_and_count(plan)?.result(Estimator::DirectPeak)
}

/// Origin-based estimator Σ I_m / (M k); the result carries every k.
pub fn mc_origin(plan: &SimulationPlan) -> Result<CountingResult> {
    simulate_and_count(plan)?.result(Estimator::McOrigin)
}

/// Refined estimator Σ J_m / (n^d M) with intersection weights x/k.
pub fn mc_refined(plan: &SimulationPlan) -> Result<CountingResult> {
    if plan.subwindow.is_none() {
        return Err(Error::InvalidArgument(
            "mc-refined needs a subwindow".into(),
        ));
    }
    simulate_and_count(plan)?.result(Estimator::McRefined)
}

/// Peak estimator Σ L_m / (n^d M).
pub fn mc_peak(plan: &SimulationPlan) -> Result<CountingResult> {
    if plan.subwindow.is_none() {
        return Err(Error::InvalidArgument("mc-peak needs a subwindow".into()));
    }
    simulate_and_count(plan)?.result(Estimator::McPeak)
}

/// Peak estimator over the even interior sites of a cos-mean field.
pub fn nonstationary_peak_empirical(plan: &SimulationPlan) -> Result<CountingResult> {
    if !matches!(
        plan.model,
        FieldModel::NonstationaryGaussian {
            mean: MeanFunction::CosPi,
            ..
        }
    ) {
        return Err(Error::InvalidArgument(
            "nonstat-peak requires the cos-mean model".into(),
        ));
    }
    simulate_and_count(plan)?.result(Estimator::NonstatPeak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvnprob::{white_noise_p, white_noise_q};

    fn wn2(m: u64, n: usize, u: f64, conn: Connectivity) -> SimulationPlan {
        SimulationPlan::new(
            FieldModel::WhiteNoise { dim: 2 },
            Window::from_extents(&[n, n], true).unwrap(),
            u,
            conn,
            m,
            42,
        )
    }

    #[test]
    fn vanishing_excursion_counts_nothing() {
        let plan = wn2(20, 30, 8.0, Connectivity::Nearest)
            .with_subwindow(Window::from_extents(&[10, 10], true).unwrap());
        let s = simulate_and_count(&plan).unwrap();
        for e in [
            Estimator::Direct,
            Estimator::DirectPeak,
            Estimator::McOrigin,
            Estimator::McRefined,
            Estimator::McPeak,
        ] {
            let r = s.result(e).unwrap();
            assert!(r.rows.is_empty(), "{e}");
            assert_eq!(r.total_estimate, 0.0);
        }
    }

    #[test]
    fn direct_counts_cover_every_exceedance_site() {
        let plan = wn2(10, 40, 0.3, Connectivity::Moore);
        let s = simulate_and_count(&plan).unwrap();
        let r = s.result(Estimator::Direct).unwrap();
        let covered: u64 = r.rows.iter().map(|row| row.k as u64 * row.count).sum();
        assert_eq!(covered, s.exceedance_sites());
    }

    #[test]
    fn refined_with_unit_subwindow_equals_origin_estimator() {
        let plan = wn2(200, 21, 0.5, Connectivity::Nearest)
            .with_subwindow(Window::new(vec![0, 0], vec![0, 0]).unwrap());
        let s = simulate_and_count(&plan).unwrap();
        let a = s.result(Estimator::McOrigin).unwrap();
        let b = s.result(Estimator::McRefined).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.estimate.to_bits(), y.estimate.to_bits());
        }
    }

    #[test]
    fn large_k_gives_zero() {
        let plan = wn2(50, 21, 1.5, Connectivity::Nearest);
        let r = mc_origin(&plan).unwrap();
        assert_eq!(r.estimate(40), 0.0);
    }

    #[test]
    fn exclusion_policy_drops_touching_clusters() {
        let plan = wn2(20, 30, 0.0, Connectivity::Nearest);
        let inc = simulate_and_count(&plan)
            .unwrap()
            .result(Estimator::Direct)
            .unwrap();
        let exc = simulate_and_count(&plan.clone().with_policy(BoundaryPolicy::ExcludeTouching))
            .unwrap()
            .result(Estimator::Direct)
            .unwrap();
        assert!(exc.total_estimate < inc.total_estimate);
        assert!(exc.boundary_excluded > 0);
        assert_eq!(inc.boundary_excluded, 0);
    }

    #[test]
    fn subwindow_must_be_interior() {
        let plan = wn2(1, 10, 0.5, Connectivity::Nearest)
            .with_subwindow(Window::from_extents(&[10, 10], true).unwrap());
        assert_eq!(
            simulate_and_count(&plan).unwrap_err(),
            Error::SubwindowOutside
        );
        assert!(mc_refined(&wn2(1, 10, 0.5, Connectivity::Nearest)).is_err());
    }

    #[test]
    fn nonstat_estimator_requires_cos_model() {
        let plan = wn2(1, 10, 0.5, Connectivity::Nearest);
        assert!(nonstationary_peak_empirical(&plan).is_err());
    }

    #[test]
    fn origin_estimator_is_near_closed_form() {
        let u = 0.5;
        let plan = wn2(20_000, 15, u, Connectivity::Nearest);
        let r = mc_origin(&plan).unwrap();
        let want = white_noise_p(u).powi(4) * white_noise_q(u);
        assert!(
            (r.estimate(1) - want).abs() < 4.0 * r.stderr(1),
            "{} vs {want}",
            r.estimate(1)
        );
    }

    #[test]
    fn deterministic_across_runs() {
        let plan = wn2(40, 25, 0.5, Connectivity::Moore)
            .with_subwindow(Window::from_extents(&[9, 9], true).unwrap());
        let a = simulate_and_count(&plan)
            .unwrap()
            .result(Estimator::McRefined)
            .unwrap();
        let b = simulate_and_count(&plan)
            .unwrap()
            .result(Estimator::McRefined)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn streaming_reports_partial_batches() {
        let plan = wn2(30, 12, 0.5, Connectivity::Nearest);
        let mut seen = Vec::new();
        let s = simulate_streaming(&plan, 10, |p| seen.push(p.realizations())).unwrap();
        assert_eq!(seen, vec![10, 20, 30]);
        let whole = simulate_and_count(&plan).unwrap();
        assert_eq!(
            s.result(Estimator::Direct).unwrap(),
            whole.result(Estimator::Direct).unwrap()
        );
    }

    #[test]
    fn tails_sum_to_total() {
        let plan = wn2(30, 30, 0.5, Connectivity::Nearest);
        let r = empirical_wk(&plan).unwrap();
        let head: f64 = r
            .rows
            .iter()
            .filter(|row| row.k <= 3)
            .map(|row| row.estimate)
            .sum();
        let (tail, _) = r.tail_beyond(3).unwrap();
        assert!((head + tail - r.total_estimate).abs() < 1e-12);
    }
}
