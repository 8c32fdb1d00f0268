//! Rooted shape catalogs against a brute-force enumerator that knows nothing
//! about the growth algorithm: every k-subset of the lex-positive half of a
//! ball around the origin, kept when it is connected.

use std::collections::{BTreeSet, VecDeque};

use csd_core::lattice::Connectivity;
use csd_core::shapes::enumerate_rooted;

type Shape = BTreeSet<Vec<i64>>;

fn adjacent(a: &[i64], b: &[i64], conn: Connectivity) -> bool {
    let diffs: Vec<i64> = a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect();
    match conn {
        Connectivity::Nearest => diffs.iter().sum::<i64>() == 1,
        Connectivity::Moore => diffs.iter().all(|&d| d <= 1) && diffs.iter().any(|&d| d > 0),
    }
}

fn connected(sites: &[Vec<i64>], conn: Connectivity) -> bool {
    let mut seen = vec![false; sites.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..sites.len() {
            if !seen[j] && adjacent(&sites[i], &sites[j], conn) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn lex_positive(c: &[i64]) -> bool {
    c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// All sites within graph distance k − 1 of the origin that are lex-greater
/// than it.
fn candidates(k: usize, dim: usize, conn: Connectivity) -> Vec<Vec<i64>> {
    let r = k as i64 - 1;
    let mut out = Vec::new();
    let side = 2 * r + 1;
    for flat in 0..side.pow(dim as u32) {
        let mut c = Vec::with_capacity(dim);
        let mut f = flat;
        for _ in 0..dim {
            c.push(f % side - r);
            f /= side;
        }
        c.reverse();
        let reach = match conn {
            Connectivity::Nearest => c.iter().map(|x| x.abs()).sum::<i64>(),
            Connectivity::Moore => c.iter().map(|x| x.abs()).max().unwrap_or(0),
        };
        if reach <= r && lex_positive(&c) {
            out.push(c);
        }
    }
    out
}

fn brute_force(k: usize, dim: usize, conn: Connectivity) -> BTreeSet<Shape> {
    let pool = candidates(k, dim, conn);
    let mut found = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn walk(
        start: usize,
        need: usize,
        pool: &[Vec<i64>],
        chosen: &mut Vec<usize>,
        dim: usize,
        conn: Connectivity,
        found: &mut BTreeSet<Shape>,
    ) {
        if need == 0 {
            let mut sites = vec![vec![0; dim]];
            sites.extend(chosen.iter().map(|&i| pool[i].clone()));
            if connected(&sites, conn) {
                found.insert(sites.into_iter().collect());
            }
            return;
        }
        for i in start..pool.len() {
            chosen.push(i);
            walk(i + 1, need - 1, pool, chosen, dim, conn, found);
            chosen.pop();
        }
    }
    walk(0, k - 1, &pool, &mut chosen, dim, conn, &mut found);
    found
}

fn engine(k: usize, dim: usize, conn: Connectivity) -> BTreeSet<Shape> {
    enumerate_rooted(k, conn, dim)
        .unwrap()
        .iter()
        .map(|s| s.sites.iter().map(|t| t.coords().to_vec()).collect())
        .collect()
}

fn shape(sites: &[[i64; 2]]) -> Shape {
    sites.iter().map(|s| s.to_vec()).collect()
}

#[test]
fn nearest_2d_counts_match_brute_force() {
    let expected = [1, 2, 6, 19, 63, 216];
    for k in 1..=6 {
        let oracle = brute_force(k, 2, Connectivity::Nearest);
        assert_eq!(oracle.len(), expected[k - 1], "oracle k={k}");
        assert_eq!(engine(k, 2, Connectivity::Nearest), oracle, "k={k}");
    }
}

#[test]
fn moore_2d_counts_match_brute_force() {
    let expected = [1, 4, 20, 110];
    for k in 1..=4 {
        let oracle = brute_force(k, 2, Connectivity::Moore);
        assert_eq!(oracle.len(), expected[k - 1], "oracle k={k}");
        assert_eq!(engine(k, 2, Connectivity::Moore), oracle, "k={k}");
    }
}

#[test]
fn other_dimensions_match_brute_force() {
    for k in 1..=4 {
        assert_eq!(
            engine(k, 3, Connectivity::Nearest),
            brute_force(k, 3, Connectivity::Nearest),
            "d=3 k={k}"
        );
        assert_eq!(engine(k, 1, Connectivity::Nearest).len(), 1);
    }
    for k in 1..=3 {
        assert_eq!(
            engine(k, 3, Connectivity::Moore),
            brute_force(k, 3, Connectivity::Moore),
            "d=3 moore k={k}"
        );
    }
}

#[test]
fn published_small_catalogs() {
    let o = [0, 0];
    let nearest2 = BTreeSet::from([shape(&[o, [1, 0]]), shape(&[o, [0, 1]])]);
    assert_eq!(engine(2, 2, Connectivity::Nearest), nearest2);

    let nearest3 = BTreeSet::from([
        shape(&[o, [1, 0], [2, 0]]),
        shape(&[o, [1, 0], [1, 1]]),
        shape(&[o, [1, 0], [1, -1]]),
        shape(&[o, [1, 0], [0, 1]]),
        shape(&[o, [0, 1], [0, 2]]),
        shape(&[o, [0, 1], [1, 1]]),
    ]);
    assert_eq!(engine(3, 2, Connectivity::Nearest), nearest3);

    let mut moore2 = nearest2.clone();
    moore2.insert(shape(&[o, [1, 1]]));
    moore2.insert(shape(&[o, [1, -1]]));
    assert_eq!(engine(2, 2, Connectivity::Moore), moore2);

    let moore3 = engine(3, 2, Connectivity::Moore);
    assert!(nearest3.is_subset(&moore3));
    assert!(moore3.contains(&shape(&[o, [1, 1], [2, 2]])));
    assert!(moore3.contains(&shape(&[o, [1, 0], [2, 1]])));
}
