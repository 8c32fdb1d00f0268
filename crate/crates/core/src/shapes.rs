//! Catalogs of finite connected lattice shapes: rooted shapes (lex-minimum at
//! the origin), their origin-containing translates, and congruence classes
//! under the hyperoctahedral group.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{neighbors, Connectivity, Site, SiteSet};

/// A connected k-site shape. For rooted catalogs the origin is the lex-minimum;
/// for origin-containing catalogs the origin is any member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedShape {
    pub sites: SiteSet,
    pub connectivity: Connectivity,
}

impl RootedShape {
    pub fn size(&self) -> usize {
        self.sites.len()
    }

    pub fn dim(&self) -> usize {
        self.sites.dim()
    }
}

/// Largest k the enumerator will accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCap(pub usize);

impl EnumerationCap {
    pub fn default_for(dim: usize) -> Self {
        match dim {
            1 => EnumerationCap(62),
            2 => EnumerationCap(12),
            3 => EnumerationCap(8),
            _ => EnumerationCap(6),
        }
    }
}

fn check_args(k: usize, dim: usize, cap: EnumerationCap) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "shape size must be at least 1".into(),
        ));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if k > cap.0 {
        return Err(Error::CapExceeded { k, cap: cap.0, dim });
    }
    Ok(())
}

/// Dense box [-r, r]^d used to mark cells during growth.
struct Grid {
    radius: i64,
    side: usize,
    dim: usize,
}

impl Grid {
    fn index(&self, c: &[i64]) -> usize {
        c.iter()
            .fold(0, |acc, &x| acc * self.side + (x + self.radius) as usize)
    }

    fn len(&self) -> usize {
        self.side.pow(self.dim as u32)
    }
}

struct Grower<'a> {
    k: usize,
    grid: Grid,
    offsets: Vec<Vec<i64>>,
    reached: Vec<bool>,
    current: Vec<Vec<i64>>,
    out: &'a mut Vec<Vec<Vec<i64>>>,
}

impl Grower<'_> {
    fn allowed(c: &[i64]) -> bool {
        // origin or lexicographically after it
        for &x in c {
            if x != 0 {
                return x > 0;
            }
        }
        true
    }

    fn grow(&mut self, mut untried: Vec<Vec<i64>>) {
        while let Some(cell) = untried.pop() {
            self.current.push(cell.clone());
            if self.current.len() == self.k {
                self.out.push(self.current.clone());
            } else {
                let mut next = untried.clone();
                let mut marked = Vec::new();
                for off in &self.offsets {
                    let n: Vec<i64> = cell.iter().zip(off).map(|(a, b)| a + b).collect();
                    if !Self::allowed(&n) {
                        continue;
                    }
                    let idx = self.grid.index(&n);
                    if !self.reached[idx] {
                        self.reached[idx] = true;
                        marked.push(idx);
                        next.push(n);
                    }
                }
                self.grow(next);
                for idx in marked {
                    self.reached[idx] = false;
                }
            }
            self.current.pop();
        }
    }
}

/// All connected k-site shapes whose lexicographic minimum is the origin,
/// each exactly once, sorted by their lex-ordered site lists.
pub fn enumerate_rooted_with_cap(
    k: usize,
    conn: Connectivity,
    dim: usize,
    cap: EnumerationCap,
) -> Result<Vec<RootedShape>> {
    check_args(k, dim, cap)?;
    let radius = k as i64;
    let grid = Grid {
        radius,
        side: 2 * k + 1,
        dim,
    };
    let mut reached = vec![false; grid.len()];
    let origin = vec![0i64; dim];
    reached[grid.index(&origin)] = true;
    let mut raw = Vec::new();
    let mut grower = Grower {
        k,
        grid,
        offsets: conn.offsets(dim),
        reached,
        current: Vec::with_capacity(k),
        out: &mut raw,
    };
    grower.grow(vec![origin]);

    let mut shapes: Vec<RootedShape> = raw
        .into_iter()
        .map(|cells| RootedShape {
            sites: SiteSet::from_sites(dim, cells.into_iter().map(Site::new)).expect("homogeneous"),
            connectivity: conn,
        })
        .collect();
    shapes.sort();
    Ok(shapes)
}

pub fn enumerate_rooted(k: usize, conn: Connectivity, dim: usize) -> Result<Vec<RootedShape>> {
    enumerate_rooted_with_cap(k, conn, dim, EnumerationCap::default_for(dim))
}

/// All translates of rooted k-shapes that contain the origin; there are
/// exactly k per rooted shape.
pub fn enumerate_containing_origin_with_cap(
    k: usize,
    conn: Connectivity,
    dim: usize,
    cap: EnumerationCap,
) -> Result<Vec<RootedShape>> {
    let rooted = enumerate_rooted_with_cap(k, conn, dim, cap)?;
    Ok(containing_origin_from_rooted(&rooted))
}

pub fn enumerate_containing_origin(
    k: usize,
    conn: Connectivity,
    dim: usize,
) -> Result<Vec<RootedShape>> {
    enumerate_containing_origin_with_cap(k, conn, dim, EnumerationCap::default_for(dim))
}

pub fn containing_origin_from_rooted(rooted: &[RootedShape]) -> Vec<RootedShape> {
    let mut out = Vec::with_capacity(rooted.iter().map(RootedShape::size).sum());
    for shape in rooted {
        for s in shape.sites.iter() {
            out.push(RootedShape {
                sites: shape.sites.translate(&s.neg()),
                connectivity: shape.connectivity,
            });
        }
    }
    out.sort();
    out
}

/// Number of in-shape neighbors of `anchor`.
pub fn peak_constraint_degree(shape: &SiteSet, anchor: &Site, conn: Connectivity) -> Result<usize> {
    if !shape.contains(anchor) {
        return Err(Error::NotInShape(anchor.to_string()));
    }
    Ok(neighbors(anchor, conn)
        .iter()
        .filter(|n| shape.contains(n))
        .count())
}

/// Signed permutation of coordinate axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisMap {
    perm: Vec<usize>,
    signs: Vec<i64>,
}

impl AxisMap {
    pub fn apply(&self, t: &Site) -> Site {
        let c = t.coords();
        Site::new(
            self.perm
                .iter()
                .zip(&self.signs)
                .map(|(&p, &s)| s * c[p])
                .collect::<Vec<_>>(),
        )
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// The 2^d · d! elements of the hyperoctahedral group.
pub fn hyperoctahedral_group(dim: usize) -> Vec<AxisMap> {
    let mut out = Vec::new();
    for perm in permutations(dim) {
        for mask in 0..(1u32 << dim) {
            let signs = (0..dim)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            out.push(AxisMap {
                perm: perm.clone(),
                signs,
            });
        }
    }
    out
}

/// Congruence class of shapes with the number of catalog members in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeClass {
    pub representative: RootedShape,
    pub multiplicity: usize,
}

fn check_homogeneous(shapes: &[RootedShape]) -> Result<()> {
    if let Some(first) = shapes.first() {
        for s in shapes {
            if s.size() != first.size()
                || s.dim() != first.dim()
                || s.connectivity != first.connectivity
            {
                return Err(Error::Heterogeneous(format!(
                    "mixed (k, d, conn): ({}, {}, {}) vs ({}, {}, {})",
                    first.size(),
                    first.dim(),
                    first.connectivity,
                    s.size(),
                    s.dim(),
                    s.connectivity
                )));
            }
        }
    }
    Ok(())
}

fn classify<F>(shapes: &[RootedShape], canonical: F) -> Result<Vec<ShapeClass>>
where
    F: Fn(&SiteSet, &[AxisMap]) -> Vec<Site>,
{
    check_homogeneous(shapes)?;
    let Some(first) = shapes.first() else {
        return Ok(Vec::new());
    };
    let group = hyperoctahedral_group(first.dim());
    let mut classes: BTreeMap<Vec<Site>, usize> = BTreeMap::new();
    let mut order: Vec<ShapeClass> = Vec::new();
    for shape in shapes {
        let key = canonical(&shape.sites, &group);
        match classes.get(&key) {
            Some(&i) => order[i].multiplicity += 1,
            None => {
                classes.insert(key, order.len());
                order.push(ShapeClass {
                    representative: shape.clone(),
                    multiplicity: 1,
                });
            }
        }
    }
    Ok(order)
}

fn canonical_up_to_translation(sites: &SiteSet, group: &[AxisMap]) -> Vec<Site> {
    group
        .iter()
        .map(|g| {
            let mut img: Vec<Site> = sites.iter().map(|s| g.apply(s)).collect();
            img.sort();
            let root = img[0].clone();
            img.iter().map(|s| s.sub(&root)).collect::<Vec<_>>()
        })
        .min()
        .expect("group is nonempty")
}

fn canonical_fixing_origin(sites: &SiteSet, group: &[AxisMap]) -> Vec<Site> {
    group
        .iter()
        .map(|g| {
            let mut img: Vec<Site> = sites.iter().map(|s| g.apply(s)).collect();
            img.sort();
            img
        })
        .min()
        .expect("group is nonempty")
}

/// Partition shapes into classes of rigid motions (signed axis permutations
/// combined with translations).
pub fn group_by_rigid_motion(shapes: &[RootedShape]) -> Result<Vec<ShapeClass>> {
    classify(shapes, canonical_up_to_translation)
}

/// Partition shapes into orbits of the signed axis permutations about the
/// origin (no translation). Used for anchored events at the origin.
pub fn group_by_origin_symmetry(shapes: &[RootedShape]) -> Result<Vec<ShapeClass>> {
    classify(shapes, canonical_fixing_origin)
}

/// Rooted shapes of every size up to `k_max`.
#[derive(Clone, Debug)]
pub struct ShapeCatalog {
    pub connectivity: Connectivity,
    pub dim: usize,
    pub shapes: Vec<Vec<RootedShape>>,
}

impl ShapeCatalog {
    pub fn rooted(
        k_max: usize,
        conn: Connectivity,
        dim: usize,
        cap: EnumerationCap,
    ) -> Result<Self> {
        let shapes = (1..=k_max)
            .map(|k| enumerate_rooted_with_cap(k, conn, dim, cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShapeCatalog {
            connectivity: conn,
            dim,
            shapes,
        })
    }

    pub fn k_max(&self) -> usize {
        self.shapes.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.shapes.iter().map(Vec::len).collect()
    }

    pub fn of_size(&self, k: usize) -> &[RootedShape] {
        &self.shapes[k - 1]
    }
}

/// JSON export of one catalog level.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CatalogExport {
    pub k: usize,
    pub connectivity: Connectivity,
    pub d: usize,
    pub shapes: Vec<Vec<Site>>,
}

impl CatalogExport {
    pub fn new(k: usize, conn: Connectivity, dim: usize, shapes: &[RootedShape]) -> Self {
        CatalogExport {
            k,
            connectivity: conn,
            d: dim,
            shapes: shapes.iter().map(|s| s.sites.to_vec()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::root_of;

    fn sets(cs: &[&[&[i64]]]) -> Vec<SiteSet> {
        let mut v: Vec<SiteSet> = cs
            .iter()
            .map(|s| SiteSet::from_coords(s.iter().map(|c| c.to_vec())).unwrap())
            .collect();
        v.sort();
        v
    }

    fn just_sites(shapes: &[RootedShape]) -> Vec<SiteSet> {
        shapes.iter().map(|s| s.sites.clone()).collect()
    }

    #[test]
    fn rooted_triominoes_match_listed_catalog() {
        let got = enumerate_rooted(3, Connectivity::Nearest, 2).unwrap();
        let want = sets(&[
            &[&[0, 0], &[1, 0], &[2, 0]],
            &[&[0, 0], &[0, 1], &[0, 2]],
            &[&[0, 0], &[1, 0], &[1, 1]],
            &[&[0, 0], &[0, 1], &[1, 1]],
            &[&[0, 0], &[1, 0], &[0, 1]],
            &[&[0, 0], &[1, 0], &[1, -1]],
        ]);
        assert_eq!(just_sites(&got), want);
    }

    #[test]
    fn rooted_moore_dominoes() {
        let got = enumerate_rooted(2, Connectivity::Moore, 2).unwrap();
        let want = sets(&[
            &[&[0, 0], &[1, 0]],
            &[&[0, 0], &[0, 1]],
            &[&[0, 0], &[1, 1]],
            &[&[0, 0], &[1, -1]],
        ]);
        assert_eq!(just_sites(&got), want);
    }

    #[test]
    fn singletons() {
        for d in 1..=3 {
            for conn in [Connectivity::Nearest, Connectivity::Moore] {
                let got = enumerate_rooted(1, conn, d).unwrap();
                assert_eq!(got.len(), 1);
                assert!(got[0].sites.first().unwrap().is_origin());
            }
        }
    }

    #[test]
    fn known_counts() {
        let nearest: Vec<usize> = (1..=6)
            .map(|k| enumerate_rooted(k, Connectivity::Nearest, 2).unwrap().len())
            .collect();
        assert_eq!(nearest, vec![1, 2, 6, 19, 63, 216]);
        let moore: Vec<usize> = (1..=4)
            .map(|k| enumerate_rooted(k, Connectivity::Moore, 2).unwrap().len())
            .collect();
        assert_eq!(moore, vec![1, 4, 20, 110]);
        // 1D: one run per size
        assert_eq!(
            enumerate_rooted(7, Connectivity::Nearest, 1).unwrap().len(),
            1
        );
        // 3D polycubes: 1, 3, 15, 86
        let cubes: Vec<usize> = (1..=4)
            .map(|k| enumerate_rooted(k, Connectivity::Nearest, 3).unwrap().len())
            .collect();
        assert_eq!(cubes, vec![1, 3, 15, 86]);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_rooted(13, Connectivity::Nearest, 2).unwrap_err();
        assert_eq!(
            err,
            Error::CapExceeded {
                k: 13,
                cap: 12,
                dim: 2
            }
        );
        assert!(enumerate_rooted_with_cap(5, Connectivity::Nearest, 2, EnumerationCap(4)).is_err());
        assert!(enumerate_rooted(0, Connectivity::Nearest, 2).is_err());
    }

    #[test]
    fn containing_origin_counts() {
        assert_eq!(
            enumerate_containing_origin(1, Connectivity::Nearest, 2)
                .unwrap()
                .len(),
            1
        );
        let dominoes = enumerate_containing_origin(2, Connectivity::Nearest, 2).unwrap();
        let want = sets(&[
            &[&[0, 0], &[1, 0]],
            &[&[-1, 0], &[0, 0]],
            &[&[0, 0], &[0, 1]],
            &[&[0, -1], &[0, 0]],
        ]);
        assert_eq!(just_sites(&dominoes), want);
        assert_eq!(
            enumerate_containing_origin(3, Connectivity::Nearest, 2)
                .unwrap()
                .len(),
            18
        );
    }

    #[test]
    fn every_shape_is_valid() {
        for conn in [Connectivity::Nearest, Connectivity::Moore] {
            for k in 1..=4 {
                for s in enumerate_rooted(k, conn, 2).unwrap() {
                    assert_eq!(s.size(), k);
                    assert!(s.sites.is_connected(conn));
                    assert!(root_of(&s.sites).unwrap().is_origin());
                }
                for s in enumerate_containing_origin(k, conn, 2).unwrap() {
                    assert!(s.sites.is_connected(conn));
                    assert!(s.sites.contains(&Site::origin(2)));
                }
            }
        }
    }

    #[test]
    fn rigid_motion_classes() {
        let tri = enumerate_rooted(3, Connectivity::Nearest, 2).unwrap();
        let classes = group_by_rigid_motion(&tri).unwrap();
        let mut mult: Vec<usize> = classes.iter().map(|c| c.multiplicity).collect();
        mult.sort();
        assert_eq!(mult, vec![2, 4]);

        let dom = enumerate_rooted(2, Connectivity::Nearest, 2).unwrap();
        let classes = group_by_rigid_motion(&dom).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].multiplicity, 2);

        let one = enumerate_rooted(1, Connectivity::Moore, 2).unwrap();
        assert_eq!(group_by_rigid_motion(&one).unwrap()[0].multiplicity, 1);

        // free tetrominoes: 5 classes over 19 fixed shapes
        let tet = enumerate_rooted(4, Connectivity::Nearest, 2).unwrap();
        let classes = group_by_rigid_motion(&tet).unwrap();
        assert_eq!(classes.len(), 5);
        assert_eq!(classes.iter().map(|c| c.multiplicity).sum::<usize>(), 19);
    }

    #[test]
    fn heterogeneous_input_rejected() {
        let mut v = enumerate_rooted(2, Connectivity::Nearest, 2).unwrap();
        v.extend(enumerate_rooted(3, Connectivity::Nearest, 2).unwrap());
        assert!(matches!(
            group_by_rigid_motion(&v),
            Err(Error::Heterogeneous(_))
        ));
    }

    #[test]
    fn origin_symmetry_orbits() {
        let dominoes = enumerate_containing_origin(2, Connectivity::Nearest, 2).unwrap();
        let orbits = group_by_origin_symmetry(&dominoes).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].multiplicity, 4);
        // triominoes through the origin: straight-end (4), straight-middle (2),
        // L-corner (4), L-end (8)
        let tri = enumerate_containing_origin(3, Connectivity::Nearest, 2).unwrap();
        let mut mult: Vec<usize> = group_by_origin_symmetry(&tri)
            .unwrap()
            .iter()
            .map(|c| c.multiplicity)
            .collect();
        mult.sort();
        assert_eq!(mult, vec![2, 4, 4, 8]);
    }

    #[test]
    fn constraint_degree() {
        let o = Site::origin(2);
        let single = SiteSet::from_coords([vec![0, 0]]).unwrap();
        assert_eq!(
            peak_constraint_degree(&single, &o, Connectivity::Nearest).unwrap(),
            0
        );
        let dom = SiteSet::from_coords([vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(
            peak_constraint_degree(&dom, &o, Connectivity::Nearest).unwrap(),
            1
        );
        let line = SiteSet::from_coords([vec![-1, 0], vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(
            peak_constraint_degree(&line, &o, Connectivity::Nearest).unwrap(),
            2
        );
        assert!(
            peak_constraint_degree(&dom, &Site::new(vec![5, 5]), Connectivity::Nearest).is_err()
        );
    }

    #[test]
    fn catalog_export_shape() {
        let shapes = enumerate_rooted(2, Connectivity::Nearest, 2).unwrap();
        let json = serde_json::to_string(&CatalogExport::new(2, Connectivity::Nearest, 2, &shapes))
            .unwrap();
        assert_eq!(
            json,
            r#"{"k":2,"connectivity":"nearest","d":2,"shapes":[[[0,0],[0,1]],[[0,0],[1,0]]]}"#
        );
    }
}
