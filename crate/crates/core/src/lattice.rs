//! Lattice geometry on ℤᵈ: sites, neighborhoods, lexicographic order,
//! connected components of excursion sets and strict local maxima.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice point. The derived ordering on equal-length coordinate vectors
/// is the lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Site(Vec<i64>);

impl Site {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        let coords = coords.into();
        assert!(!coords.is_empty(), "a site needs at least one coordinate");
        Site(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Site::new(vec![0; dim])
    }

    /// The unit vector e_axis.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut c = vec![0; dim];
        c[axis] = 1;
        Site(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn offset(&self, delta: &[i64]) -> Site {
        debug_assert_eq!(delta.len(), self.dim());
        Site(self.0.iter().zip(delta).map(|(a, b)| a + b).collect())
    }

    pub fn add(&self, other: &Site) -> Site {
        self.offset(&other.0)
    }

    pub fn sub(&self, other: &Site) -> Site {
        Site(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Site {
        Site(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Vec<i64>> for Site {
    fn from(v: Vec<i64>) -> Self {
        Site::new(v)
    }
}

/// Neighborhood system on ℤᵈ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    /// Unit Euclidean distance, 2d neighbors.
    Nearest,
    /// Unit max-norm distance, 3^d - 1 neighbors.
    Moore,
}

impl Connectivity {
    pub fn neighbor_count(self, dim: usize) -> usize {
        match self {
            Connectivity::Nearest => 2 * dim,
            Connectivity::Moore => 3usize.pow(dim as u32) - 1,
        }
    }

    /// Neighbor offsets of the origin, in lexicographic order.
    pub fn offsets(self, dim: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.neighbor_count(dim));
        match self {
            Connectivity::Nearest => {
                for axis in 0..dim {
                    for s in [-1, 1] {
                        let mut v = vec![0; dim];
                        v[axis] = s;
                        out.push(v);
                    }
                }
            }
            Connectivity::Moore => {
                let total = 3usize.pow(dim as u32);
                for code in 0..total {
                    let mut v = vec![0; dim];
                    let mut c = code;
                    for axis in (0..dim).rev() {
                        v[axis] = (c % 3) as i64 - 1;
                        c /= 3;
                    }
                    if v.iter().any(|&x| x != 0) {
                        out.push(v);
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn are_neighbors(self, a: &Site, b: &Site) -> bool {
        let diffs = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| (x - y).abs());
        match self {
            Connectivity::Nearest => {
                let mut total = 0;
                for d in diffs {
                    total += d;
                }
                total == 1
            }
            Connectivity::Moore => {
                let mut any = false;
                for d in diffs {
                    if d > 1 {
                        return false;
                    }
                    any |= d == 1;
                }
                any
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Connectivity::Nearest => "nearest",
            Connectivity::Moore => "moore",
        }
    }
}

impl std::str::FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nearest" | "4" | "von-neumann" => Ok(Connectivity::Nearest),
            "moore" | "8" => Ok(Connectivity::Moore),
            other => Err(Error::InvalidArgument(format!(
                "unknown connectivity '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite, dimension-homogeneous set of sites kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SiteSet {
    dim: usize,
    members: BTreeSet<Site>,
}

impl SiteSet {
    pub fn new(dim: usize) -> Self {
        SiteSet {
            dim,
            members: BTreeSet::new(),
        }
    }

    pub fn from_sites<I>(dim: usize, sites: I) -> Result<Self>
    where
        I: IntoIterator<Item = Site>,
    {
        let mut set = SiteSet::new(dim);
        for s in sites {
            set.insert(s)?;
        }
        Ok(set)
    }

    /// Builds a set from coordinate vectors, inferring the dimension from the
    /// first one.
    pub fn from_coords<I, V>(coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<i64>>,
    {
        let sites: Vec<Site> = coords.into_iter().map(|c| Site::new(c)).collect();
        let dim = sites.first().map(Site::dim).ok_or(Error::EmptyShape)?;
        SiteSet::from_sites(dim, sites)
    }

    pub fn insert(&mut self, site: Site) -> Result<bool> {
        if site.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: site.dim(),
            });
        }
        Ok(self.members.insert(site))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, site: &Site) -> bool {
        self.members.contains(site)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Site> + '_ {
        self.members.iter()
    }

    /// Lexicographically smallest member.
    pub fn first(&self) -> Option<&Site> {
        self.members.iter().next()
    }

    pub fn translate(&self, v: &Site) -> SiteSet {
        SiteSet {
            dim: self.dim,
            members: self.members.iter().map(|s| s.add(v)).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &SiteSet) -> bool {
        self.members.is_disjoint(&other.members)
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Whether the set is connected under `conn`. The empty set is not.
    pub fn is_connected(&self, conn: Connectivity) -> bool {
        let Some(start) = self.first() else {
            return false;
        };
        let offsets = conn.offsets(self.dim);
        let mut seen: BTreeSet<&Site> = BTreeSet::new();
        let mut stack = vec![start.clone()];
        seen.insert(start);
        while let Some(s) = stack.pop() {
            for off in &offsets {
                let n = s.offset(off);
                if let Some(member) = self.members.get(&n) {
                    if seen.insert(member) {
                        stack.push(n);
                    }
                }
            }
        }
        seen.len() == self.len()
    }

    pub fn to_vec(&self) -> Vec<Site> {
        self.members.iter().cloned().collect()
    }
}

impl<'a> IntoIterator for &'a SiteSet {
    type Item = &'a Site;
    type IntoIter = std::collections::btree_set::Iter<'a, Site>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

pub fn neighbors(t: &Site, conn: Connectivity) -> SiteSet {
    let mut set = SiteSet::new(t.dim());
    for off in conn.offsets(t.dim()) {
        set.members.insert(t.offset(&off));
    }
    set
}

/// 𝒩(D): all neighbors of members of D that are not themselves in D.
pub fn exterior_neighbors(shape: &SiteSet, conn: Connectivity) -> Result<SiteSet> {
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    let offsets = conn.offsets(shape.dim());
    let mut out = SiteSet::new(shape.dim());
    for s in shape {
        for off in &offsets {
            let n = s.offset(off);
            if !shape.contains(&n) {
                out.members.insert(n);
            }
        }
    }
    Ok(out)
}

pub fn lex_compare(a: &Site, b: &Site) -> Result<Ordering> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.cmp(b))
}

/// The root of a cluster: its lexicographically smallest site.
pub fn root_of(cluster: &SiteSet) -> Result<Site> {
    cluster.first().cloned().ok_or(Error::EmptyShape)
}

/// Inclusive axis-aligned box of lattice sites. Sites are indexed row-major
/// (last axis fastest), so flat index order coincides with lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.is_empty() {
            return Err(Error::InvalidArgument(
                "window needs at least one axis".into(),
            ));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidArgument(format!(
                "window corners {lo:?} > {hi:?}"
            )));
        }
        Ok(Window { lo, hi })
    }

    /// The box {0..n-1}^d.
    pub fn cube(n: usize, dim: usize) -> Result<Self> {
        Window::from_extents(&vec![n; dim], false)
    }

    /// A box with the given extents. When `centered`, each axis runs over
    /// -(n/2) ..= n - 1 - n/2 so that the origin is an interior site.
    pub fn from_extents(extents: &[usize], centered: bool) -> Result<Self> {
        if extents.contains(&0) {
            return Err(Error::InvalidArgument(
                "window extents must be positive".into(),
            ));
        }
        let lo: Vec<i64> = extents
            .iter()
            .map(|&n| if centered { -((n / 2) as i64) } else { 0 })
            .collect();
        let hi = lo
            .iter()
            .zip(extents)
            .map(|(l, &n)| l + n as i64 - 1)
            .collect();
        Window::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn extents(&self) -> Vec<usize> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.extents().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: &Site) -> bool {
        t.dim() == self.dim()
            && t.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (l, h))| l <= c && c <= h)
    }

    /// Whether `inner` lies inside this window without touching its boundary.
    pub fn strictly_contains(&self, inner: &Window) -> bool {
        inner.dim() == self.dim()
            && (0..self.dim()).all(|i| inner.lo[i] > self.lo[i] && inner.hi[i] < self.hi[i])
    }

    pub fn strides(&self) -> Vec<usize> {
        let ext = self.extents();
        let mut strides = vec![1; ext.len()];
        for i in (0..ext.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * ext[i + 1];
        }
        strides
    }

    pub fn index_of(&self, t: &Site) -> Option<usize> {
        if !self.contains(t) {
            return None;
        }
        let strides = self.strides();
        Some(
            t.coords()
                .iter()
                .zip(&self.lo)
                .zip(&strides)
                .map(|((c, l), s)| (c - l) as usize * s)
                .sum(),
        )
    }

    pub fn site_at(&self, mut index: usize) -> Site {
        let strides = self.strides();
        let mut coords = vec![0; self.dim()];
        for i in 0..self.dim() {
            coords[i] = self.lo[i] + (index / strides[i]) as i64;
            index %= strides[i];
        }
        Site(coords)
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.len()).map(move |i| self.site_at(i))
    }

    pub fn describe(&self) -> String {
        self.extents()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// Indicator of {X_t > u} over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcursionMask {
    pub window: Window,
    pub above: Vec<bool>,
}

impl ExcursionMask {
    pub fn new(window: Window, above: Vec<bool>) -> Result<Self> {
        if above.len() != window.len() {
            return Err(Error::InvalidArgument(format!(
                "mask has {} entries for a window of {} sites",
                above.len(),
                window.len()
            )));
        }
        Ok(ExcursionMask { window, above })
    }

    pub fn from_values(window: Window, values: &[f64], u: f64) -> Result<Self> {
        let above = values.iter().map(|&v| v > u).collect();
        ExcursionMask::new(window, above)
    }

    /// Mask whose true sites are exactly `sites` (all must lie in the window).
    pub fn from_sites(window: Window, sites: &SiteSet) -> Result<Self> {
        let mut above = vec![false; window.len()];
        for s in sites {
            let idx = window
                .index_of(s)
                .ok_or_else(|| Error::InvalidArgument(format!("site {s} outside window")))?;
            above[idx] = true;
        }
        ExcursionMask::new(window, above)
    }

    pub fn count(&self) -> usize {
        self.above.iter().filter(|&&b| b).count()
    }
}

/// Neighbor stencil of a window expressed as flat index offsets.
#[derive(Clone, Debug)]
pub(crate) struct Stencil {
    offsets: Vec<Vec<i64>>,
    deltas: Vec<isize>,
    extents: Vec<usize>,
}

impl Stencil {
    pub(crate) fn new(window: &Window, conn: Connectivity) -> Self {
        let offsets = conn.offsets(window.dim());
        let strides = window.strides();
        let deltas = offsets
            .iter()
            .map(|o| {
                o.iter()
                    .zip(&strides)
                    .map(|(&c, &s)| c as isize * s as isize)
                    .sum()
            })
            .collect();
        Stencil {
            offsets,
            deltas,
            extents: window.extents(),
        }
    }

    /// Visits every in-window neighbor (flat index) of the site with the
    /// given local coordinates.
    #[inline]
    pub(crate) fn for_each_neighbor(
        &self,
        index: usize,
        local: &[usize],
        mut f: impl FnMut(usize),
    ) {
        'offsets: for (off, &delta) in self.offsets.iter().zip(&self.deltas) {
            for ((&o, &c), &e) in off.iter().zip(local).zip(&self.extents) {
                let c = c as i64 + o;
                if c < 0 || c >= e as i64 {
                    continue 'offsets;
                }
            }
            f((index as isize + delta) as usize);
        }
    }

    /// Neighbors with smaller flat index only (used by single-pass labeling).
    #[inline]
    fn for_each_backward(&self, index: usize, local: &[usize], mut f: impl FnMut(usize)) {
        'offsets: for (off, &delta) in self.offsets.iter().zip(&self.deltas) {
            if delta > 0 {
                continue;
            }
            for ((&o, &c), &e) in off.iter().zip(local).zip(&self.extents) {
                let c = c as i64 + o;
                if c < 0 || c >= e as i64 {
                    continue 'offsets;
                }
            }
            f((index as isize + delta) as usize);
        }
    }
}

/// Row-major odometer over local coordinates of a window.
pub(crate) fn advance(local: &mut [usize], extents: &[usize]) {
    for axis in (0..local.len()).rev() {
        local[axis] += 1;
        if local[axis] < extents[axis] {
            return;
        }
        local[axis] = 0;
    }
}

pub(crate) fn on_boundary(local: &[usize], extents: &[usize]) -> bool {
    local
        .iter()
        .zip(extents)
        .any(|(&c, &e)| c == 0 || c + 1 == e)
}

pub const UNLABELED: u32 = u32::MAX;

/// Per-site component labels of an excursion set.
///
/// Labels are assigned in order of each component's lexicographically smallest
/// site.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
    pub touches_boundary: Vec<bool>,
    pub roots: Vec<usize>,
}

impl Labeling {
    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label(&self, index: usize) -> Option<usize> {
        match self.labels[index] {
            UNLABELED => None,
            l => Some(l as usize),
        }
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

/// Single-pass union-find labeling of `above` over `window`.
pub fn label_components(window: &Window, above: &[bool], conn: Connectivity) -> Labeling {
    assert_eq!(above.len(), window.len());
    let n = above.len();
    let stencil = Stencil::new(window, conn);
    let extents = window.extents();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut local = vec![0usize; window.dim()];
    for i in 0..n {
        if above[i] {
            stencil.for_each_backward(i, &local, |j| {
                if above[j] {
                    let ri = find(&mut parent, i as u32);
                    let rj = find(&mut parent, j as u32);
                    // the smaller index stays the root so roots are lex-minimal
                    if ri < rj {
                        parent[rj as usize] = ri;
                    } else if rj < ri {
                        parent[ri as usize] = rj;
                    }
                }
            });
        }
        advance(&mut local, &extents);
    }

    let mut labels = vec![UNLABELED; n];
    let mut sizes = Vec::new();
    let mut touches = Vec::new();
    let mut roots = Vec::new();
    local.iter_mut().for_each(|c| *c = 0);
    for i in 0..n {
        if above[i] {
            let r = find(&mut parent, i as u32) as usize;
            let label = if r == i {
                let l = sizes.len() as u32;
                sizes.push(0);
                touches.push(false);
                roots.push(i);
                l
            } else {
                labels[r]
            };
            labels[i] = label;
            sizes[label as usize] += 1;
            if on_boundary(&local, &extents) {
                touches[label as usize] = true;
            }
        }
        advance(&mut local, &extents);
    }
    Labeling {
        labels,
        sizes,
        touches_boundary: touches,
        roots,
    }
}

/// Maximal connected subsets of the true sites, ordered by lex-smallest member.
pub fn connected_components(mask: &ExcursionMask, conn: Connectivity) -> Vec<SiteSet> {
    let labeling = label_components(&mask.window, &mask.above, conn);
    let mut out: Vec<SiteSet> = (0..labeling.component_count())
        .map(|_| SiteSet::new(mask.window.dim()))
        .collect();
    for (i, &l) in labeling.labels.iter().enumerate() {
        if l != UNLABELED {
            out[l as usize].members.insert(mask.window.site_at(i));
        }
    }
    out
}

/// Debug record of a labeled excursion set.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentRecord {
    pub window: Window,
    pub connectivity: Connectivity,
    pub clusters: Vec<Vec<Site>>,
}

impl ComponentRecord {
    pub fn from_mask(mask: &ExcursionMask, conn: Connectivity) -> Self {
        ComponentRecord {
            window: mask.window.clone(),
            connectivity: conn,
            clusters: connected_components(mask, conn)
                .iter()
                .map(SiteSet::to_vec)
                .collect(),
        }
    }
}

/// Strict local maxima above a threshold.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LocalMaxima {
    /// Peak sites in lexicographic order.
    pub sites: Vec<Site>,
    /// Candidates above the threshold that equal (and are not exceeded by)
    /// some neighbor; these are excluded.
    pub ties: usize,
    /// Set when the window has no interior site.
    pub window_too_small: bool,
}

/// Flat indices of strict interior local maxima above `u`, plus the tie count.
pub(crate) fn peak_indices(
    window: &Window,
    values: &[f64],
    u: f64,
    conn: Connectivity,
) -> (Vec<usize>, usize) {
    let extents = window.extents();
    let stencil = Stencil::new(window, conn);
    let mut peaks = Vec::new();
    let mut ties = 0;
    if extents.iter().any(|&e| e < 3) {
        return (peaks, ties);
    }
    let mut local = vec![0usize; window.dim()];
    for i in 0..values.len() {
        let v = values[i];
        if v > u && !on_boundary(&local, &extents) {
            let mut strict = true;
            let mut tied = false;
            stencil.for_each_neighbor(i, &local, |j| {
                let w = values[j];
                if w > v {
                    strict = false;
                } else if w == v {
                    tied = true;
                }
            });
            if strict && !tied {
                peaks.push(i);
            } else if strict && tied {
                ties += 1;
            }
        }
        advance(&mut local, &extents);
    }
    (peaks, ties)
}

/// Sites t with X_t > u and X_t strictly above every neighbor. Sites on the
/// window boundary are never classified as peaks.
pub fn local_maxima_in(
    window: &Window,
    values: &[f64],
    u: f64,
    conn: Connectivity,
) -> Result<LocalMaxima> {
    if values.len() != window.len() {
        return Err(Error::InvalidArgument(format!(
            "{} values for a window of {} sites",
            values.len(),
            window.len()
        )));
    }
    let too_small = window.extents().iter().any(|&e| e < 3);
    if too_small {
        log::warn!(
            "window {} has no interior site; no local maxima reported",
            window.describe()
        );
    }
    let (idx, ties) = peak_indices(window, values, u, conn);
    if ties > 0 {
        log::warn!("{ties} exact ties among local-maximum candidates were excluded");
    }
    Ok(LocalMaxima {
        sites: idx.into_iter().map(|i| window.site_at(i)).collect(),
        ties,
        window_too_small: too_small,
    })
}

pub fn local_maxima(
    values: &crate::fields::Realization,
    u: f64,
    conn: Connectivity,
) -> Result<LocalMaxima> {
    local_maxima_in(&values.window, &values.values, u, conn)
}
