//! Joint Monte-Carlo for cluster events of the chi-squared field.
//!
//! The two Gaussian layers are drawn on a box of radius k_max around the
//! origin, one site at a time in order of distance from the origin, and only
//! as far as the flood fill from the origin needs them. One pass yields the
//! rooted, inside and peak event frequencies for every k ≤ k_max together
//! with the peak denominator.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{gaussian_layer_covariance, realization_rng, FieldModel};
use crate::lattice::{Connectivity, Site};
use crate::linalg::Matrix;
use crate::mvnprob::{Method, ProbEstimate};

const CHUNKS: u64 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct PatchEstimates {
    pub draws: u64,
    /// Index k − 1: origin is the root of a size-k cluster.
    pub rooted: Vec<ProbEstimate>,
    /// Index k − 1: origin lies in a size-k cluster.
    pub inside: Vec<ProbEstimate>,
    /// Index k − 1: origin is a local maximum of a size-k cluster.
    pub peak: Vec<ProbEstimate>,
    /// Origin above u and above all its neighbors.
    pub peak_denominator: ProbEstimate,
}

struct Patch {
    sites: Vec<Site>,
    chol: Matrix,
    neighbors: Vec<Vec<usize>>,
    origin_neighbors: Vec<usize>,
}

impl Patch {
    fn new(model: &FieldModel, k_max: usize, conn: Connectivity) -> Result<Self> {
        let dim = model.dim();
        let radius = k_max as i64;
        let side = 2 * radius + 1;
        let total = (side as usize).pow(dim as u32);
        let mut sites: Vec<Site> = (0..total)
            .map(|mut flat| {
                let mut c = vec![0i64; dim];
                for slot in c.iter_mut().rev() {
                    *slot = (flat % side as usize) as i64 - radius;
                    flat /= side as usize;
                }
                Site::new(c)
            })
            .collect();
        sites.sort_by_key(|s| (s.coords().iter().map(|c| c * c).sum::<i64>(), s.clone()));
        let position = |s: &Site| -> Option<usize> {
            if s.coords().iter().any(|c| c.abs() > radius) {
                return None;
            }
            sites
                .binary_search_by_key(
                    &(s.coords().iter().map(|c| c * c).sum::<i64>(), s.clone()),
                    |t| (t.coords().iter().map(|c| c * c).sum::<i64>(), t.clone()),
                )
                .ok()
        };
        let offsets = conn.offsets(dim);
        let neighbors: Vec<Vec<usize>> = sites
            .iter()
            .map(|s| {
                offsets
                    .iter()
                    .filter_map(|o| position(&s.offset(o)))
                    .collect()
            })
            .collect();
        let origin_neighbors = neighbors[0].clone();
        let cov = gaussian_layer_covariance(&sites, model)?;
        let chol = cov.cholesky(1e-10)?;
        Ok(Patch {
            sites,
            chol,
            neighbors,
            origin_neighbors,
        })
    }
}

#[derive(Default, Clone)]
struct Counts {
    rooted: Vec<u64>,
    inside: Vec<u64>,
    peak: Vec<u64>,
    denominator: u64,
}

impl Counts {
    fn new(k_max: usize) -> Self {
        Counts {
            rooted: vec![0; k_max],
            inside: vec![0; k_max],
            peak: vec![0; k_max],
            denominator: 0,
        }
    }
}

/// Lazily evaluated chi-squared values on the patch for one draw.
struct Draw<'a> {
    patch: &'a Patch,
    z1: Vec<f64>,
    z2: Vec<f64>,
    values: Vec<f64>,
    computed: usize,
}

impl<'a> Draw<'a> {
    fn new(patch: &'a Patch) -> Self {
        let n = patch.sites.len();
        Draw {
            patch,
            z1: vec![0.0; n],
            z2: vec![0.0; n],
            values: vec![0.0; n],
            computed: 0,
        }
    }

    fn value(&mut self, i: usize, rng: &mut impl rand::Rng) -> f64 {
        let n = self.patch.sites.len();
        while self.computed <= i {
            let c = self.computed;
            self.z1[c] = StandardNormal.sample(rng);
            self.z2[c] = StandardNormal.sample(rng);
            let row = &self.patch.chol;
            let (mut x, mut y) = (0.0, 0.0);
            for j in 0..=c {
                let l = row.get(c, j);
                x += l * self.z1[j];
                y += l * self.z2[j];
            }
            self.values[c] = (x * x + y * y) / 2.0 - 1.0;
            self.computed += 1;
            debug_assert!(self.computed <= n);
        }
        self.values[i]
    }
}

fn run_chunk(patch: &Patch, k_max: usize, u: f64, draws: u64, seed: u64, chunk: u64) -> Counts {
    let mut rng = realization_rng(seed, chunk);
    let mut counts = Counts::new(k_max);
    let mut draw = Draw::new(patch);
    let n = patch.sites.len();
    let mut mark = vec![0u64; n];
    let mut stamp = 0u64;
    let mut cluster: Vec<usize> = Vec::with_capacity(k_max + 1);
    let mut stack: Vec<usize> = Vec::new();
    for _ in 0..draws {
        draw.computed = 0;
        let v0 = draw.value(0, &mut rng);
        if v0 <= u {
            continue;
        }
        let mut is_peak = true;
        for &j in &patch.origin_neighbors {
            if draw.value(j, &mut rng) >= v0 {
                is_peak = false;
            }
        }
        counts.denominator += u64::from(is_peak);

        stamp += 1;
        cluster.clear();
        stack.clear();
        mark[0] = stamp;
        stack.push(0);
        let mut overflow = false;
        while let Some(i) = stack.pop() {
            cluster.push(i);
            if cluster.len() > k_max {
                overflow = true;
                break;
            }
            for &j in &patch.neighbors[i] {
                if mark[j] != stamp {
                    mark[j] = stamp;
                    if draw.value(j, &mut rng) > u {
                        stack.push(j);
                    }
                }
            }
        }
        if overflow {
            continue;
        }
        let k = cluster.len();
        counts.inside[k - 1] += 1;
        let origin = &patch.sites[0];
        if cluster.iter().all(|&i| patch.sites[i] >= *origin) {
            counts.rooted[k - 1] += 1;
        }
        if is_peak {
            counts.peak[k - 1] += 1;
        }
    }
    counts
}

fn binomial(hits: u64, draws: u64) -> ProbEstimate {
    let p = hits as f64 / draws as f64;
    ProbEstimate {
        value: p,
        stderr: (p * (1.0 - p) / draws as f64).sqrt(),
        method: Method::MonteCarlo,
        evaluations: draws,
        converged: true,
    }
}

/// Event frequencies at the origin for k ≤ k_max from `draws` joint draws.
pub fn chi_squared_patch(
    model: &FieldModel,
    u: f64,
    conn: Connectivity,
    k_max: usize,
    draws: u64,
    seed: u64,
) -> Result<PatchEstimates> {
    if !matches!(model, FieldModel::ChiSquared { .. }) {
        return Err(Error::InvalidArgument(
            "patch Monte-Carlo is for the chi-squared model".into(),
        ));
    }
    if k_max == 0 || draws == 0 {
        return Err(Error::InvalidArgument(
            "k_max and draws must be positive".into(),
        ));
    }
    let patch = Patch::new(model, k_max, conn)?;
    let parts: Vec<Counts> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let count = draws / CHUNKS + u64::from(c < draws % CHUNKS);
            run_chunk(&patch, k_max, u, count, seed, c)
        })
        .collect();
    let mut total = Counts::new(k_max);
    for part in &parts {
        for k in 0..k_max {
            total.rooted[k] += part.rooted[k];
            total.inside[k] += part.inside[k];
            total.peak[k] += part.peak[k];
        }
        total.denominator += part.denominator;
    }
    Ok(PatchEstimates {
        draws,
        rooted: total.rooted.iter().map(|&h| binomial(h, draws)).collect(),
        inside: total.inside.iter().map(|&h| binomial(h, draws)).collect(),
        peak: total.peak.iter().map(|&h| binomial(h, draws)).collect(),
        peak_denominator: binomial(total.denominator, draws),
    })
}
