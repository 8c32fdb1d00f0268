//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines print in order.

use std::collections::{BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use statrs::distribution::{ContinuousCDF, Normal};

use csd_cli::commands::{reproduce_table, ReproduceOptions};
use csd_cli::config::DEFAULT_SEED;
use csd_cli::reference::{self, Column, RefTable};
use csd_core::empirical::{empirical_wk, simulate_and_count, Estimator, SimulationPlan};
use csd_core::fields::FieldModel;
use csd_core::lattice::{Connectivity, Site, Window};
use csd_core::shapes::enumerate_rooted;
use csd_core::theory::{
    cluster_size_distribution, inside_consistency, peak_csd_1d, peak_denominator_at,
    total_variation, wk_1d, wk_exact, wk_exact_all, wk_peak, wn_partition_polynomial,
    NormalizationMode, TheorySettings,
};

type Outcome = Result<String, String>;

fn phi(u: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(u)
}

fn model(name: &str) -> FieldModel {
    FieldModel::preset(name).unwrap()
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, format!("took {:.1?}, limit {:?}", t, limit))
}

/// Compares one computed value against a printed reference entry. Returns
/// false for a gated mismatch; errata are counted separately.
struct TableCheck<'a> {
    table: &'a RefTable,
    tol: f64,
    gated: usize,
    errata: usize,
    failures: Vec<String>,
}

impl<'a> TableCheck<'a> {
    fn new(id: u8, tol: f64) -> Self {
        TableCheck {
            table: reference::table(id).unwrap(),
            tol,
            gated: 0,
            errata: 0,
            failures: Vec::new(),
        }
    }

    fn compare(&mut self, u: f64, column: Column, k: usize, ours: f64, printed: &str) {
        if reference::erratum(self.table.id, u, column, k).is_some() {
            self.errata += 1;
            return;
        }
        self.gated += 1;
        let gate = self.tol.max(reference::rounding_slack(printed));
        let gap = (ours - reference::value(printed)).abs();
        if gap > gate {
            self.failures.push(format!(
                "u={u} {column:?} k={k}: {ours:.6} vs {printed} (gap {gap:.2e})"
            ));
        }
    }

    fn finish(self) -> Outcome {
        if self.failures.is_empty() {
            Ok(format!(
                "{} entries within tolerance, {} errata reported",
                self.gated, self.errata
            ))
        } else {
            Err(self.failures.join("; "))
        }
    }
}

fn c1_white_noise_1d() -> Outcome {
    let start = Instant::now();
    let wn = model("wn1d");
    let s = TheorySettings::default();
    let mut tc = TableCheck::new(1, 5e-5);
    for block in tc.table.blocks {
        let u = block.u;
        let p = phi(u);
        let q = 1.0 - p;
        let exact = cluster_size_distribution(
            u,
            &wn,
            Connectivity::Nearest,
            6,
            NormalizationMode::ExactDenominator,
            &s,
        )
        .map_err(|e| e.to_string())?;
        let peak = peak_csd_1d(0, u, &wn, 6, &s).map_err(|e| e.to_string())?;
        for k in 1..=6 {
            let kf = k as f64;
            let w = p * p * q.powi(k as i32);
            let mass = p * q.powi(k as i32 - 1);
            let wp = if k == 1 {
                p * p * q
            } else {
                (kf + 1.0) * p * p * q.powi(k as i32) / 3.0
            };
            let mp = if k == 1 {
                3.0 * p * p * q / (1.0 - p.powi(3))
            } else {
                (kf + 1.0) * p * p * q.powi(k as i32) / (1.0 - p.powi(3))
            };
            for (what, ours, formula) in [
                ("w", exact.w(k), w),
                ("mass", exact.mass(k), mass),
                ("peak", peak.w(k), wp),
                ("peak mass", peak.mass(k), mp),
            ] {
                check(
                    (ours - formula).abs() <= 1e-12,
                    format!("u={u} {what}({k}) = {ours} vs closed form {formula}"),
                )?;
            }
        }
        check(
            (exact.denominator.value - p * q).abs() < 1e-12,
            "sum of w differs from pq",
        )?;
        check(
            (peak.denominator.value - (1.0 - p.powi(3)) / 3.0).abs() < 1e-12,
            "peak denominator differs",
        )?;
        for r in block.rows {
            let k = r.k;
            let w = r.w.unwrap();
            tc.compare(u, Column::W, k, exact.w(k), w.value);
            tc.compare(u, Column::WMass, k, exact.mass(k), w.mass);
            tc.compare(u, Column::Peak, k, peak.w(k), r.peak.value);
            tc.compare(u, Column::PeakMass, k, peak.mass(k), r.peak.mass);
        }
        tc.compare(
            u,
            Column::W,
            0,
            exact.denominator.value,
            block.sum_w.unwrap(),
        );
        tc.compare(u, Column::Peak, 0, peak.denominator.value, block.sum_peak);
    }
    within_time(start, Duration::from_secs(1))?;
    tc.finish()
}

fn c2_correlated_1d() -> Outcome {
    let start = Instant::now();
    let m = model("sq-exp-1d");
    let s = TheorySettings::default();
    let mut tc = TableCheck::new(2, 5e-4);
    for block in tc.table.blocks {
        let u = block.u;
        let exact = cluster_size_distribution(
            u,
            &m,
            Connectivity::Nearest,
            6,
            NormalizationMode::ExactDenominator,
            &s,
        )
        .map_err(|e| e.to_string())?;
        let peak = peak_csd_1d(0, u, &m, 4, &s).map_err(|e| e.to_string())?;
        for r in block.rows {
            let k = r.k;
            let w = r.w.unwrap();
            tc.compare(u, Column::W, k, exact.w(k), w.value);
            tc.compare(u, Column::WMass, k, exact.mass(k), w.mass);
            if k <= 4 {
                tc.compare(u, Column::Peak, k, peak.w(k), r.peak.value);
                tc.compare(u, Column::PeakMass, k, peak.mass(k), r.peak.mass);
            }
        }
        tc.compare(
            u,
            Column::W,
            0,
            exact.denominator.value,
            block.sum_w.unwrap(),
        );
        tc.compare(u, Column::Peak, 0, peak.denominator.value, block.sum_peak);
    }
    within_time(start, Duration::from_secs(120))?;
    tc.finish()
}

/// Independent white-noise polynomials for k ≤ 3: the two worked examples
/// plus a direct sum over brute-force shapes.
fn wn_oracle(k: usize, conn: Connectivity, peak: bool, p: f64) -> f64 {
    let shapes = brute_force(k, 2, conn);
    let q = 1.0 - p;
    let mut total = 0.0;
    for shape in &shapes {
        let exterior = exterior(shape, conn);
        let base = p.powi(exterior as i32) * q.powi(k as i32);
        if !peak {
            total += base;
            continue;
        }
        // every translate putting the origin on a member; the anchor is the
        // largest of itself and its in-shape neighbors with probability 1/(m+1)
        for anchor in shape {
            let m = shape.iter().filter(|t| adjacent(t, anchor, conn)).count();
            total += base / (m as f64 + 1.0);
        }
    }
    total
}

fn c3_white_noise_2d() -> Outcome {
    let wn = model("wn2d");
    let s = TheorySettings::default();
    let o = Site::origin(2);
    let mut worst: f64 = 0.0;
    for u in [0.5, 1.5, -0.3, 2.2] {
        let p = phi(u);
        let q = 1.0 - p;
        let examples = [
            (
                "nearest w3",
                Connectivity::Nearest,
                3,
                false,
                (2.0 * p.powi(8) + 4.0 * p.powi(7)) * q.powi(3),
            ),
            (
                "moore w2",
                Connectivity::Moore,
                2,
                false,
                (2.0 * p.powi(10) + 2.0 * p.powi(12)) * q.powi(2),
            ),
            (
                "nearest w3 peak",
                Connectivity::Nearest,
                3,
                true,
                8.0 / 3.0 * (2.0 * p.powi(7) + p.powi(8)) * q.powi(3),
            ),
            (
                "moore w3 peak",
                Connectivity::Moore,
                3,
                true,
                4.0 / 3.0
                    * (5.0 * p.powi(12) + 8.0 * p.powi(14) + 4.0 * p.powi(15) + 2.0 * p.powi(16))
                    * q.powi(3),
            ),
        ];
        for (name, conn, k, peak, formula) in examples {
            let ours = if peak {
                wk_peak(k, &o, u, &wn, conn, &s)
            } else {
                wk_exact(k, u, &wn, conn, &s)
            }
            .map_err(|e| e.to_string())?
            .value;
            worst = worst.max((ours - formula).abs());
            check(
                (ours - formula).abs() <= 1e-12,
                format!("u={u} {name}: {ours} vs {formula}"),
            )?;
        }
        for conn in [Connectivity::Nearest, Connectivity::Moore] {
            for k in 1..=3 {
                for peak in [false, true] {
                    let ours = if peak {
                        wk_peak(k, &o, u, &wn, conn, &s)
                    } else {
                        wk_exact(k, u, &wn, conn, &s)
                    }
                    .map_err(|e| e.to_string())?
                    .value;
                    let oracle = wn_oracle(k, conn, peak, p);
                    worst = worst.max((ours - oracle).abs());
                    check(
                        (ours - oracle).abs() <= 1e-12,
                        format!("u={u} {conn} k={k} peak={peak}: {ours} vs {oracle}"),
                    )?;
                }
            }
        }
    }
    let mut tc = TableCheck::new(6, 5e-4);
    for block in tc.table.blocks {
        let u = block.u;
        let den = peak_denominator_at(&o, u, &wn, Connectivity::Moore, &s)
            .map_err(|e| e.to_string())?
            .value;
        for r in block.rows.iter().filter(|r| r.k <= 3) {
            let w = wk_exact(r.k, u, &wn, Connectivity::Moore, &s)
                .map_err(|e| e.to_string())?
                .value;
            let wp = wk_peak(r.k, &o, u, &wn, Connectivity::Moore, &s)
                .map_err(|e| e.to_string())?
                .value;
            tc.compare(u, Column::W, r.k, w, r.w.unwrap().value);
            tc.compare(u, Column::Peak, r.k, wp, r.peak.value);
            tc.compare(u, Column::PeakMass, r.k, wp / den, r.peak.mass);
        }
    }
    tc.finish()
        .map(|m| format!("max |engine - polynomial| = {worst:.1e}; head rows: {m}"))
}

fn c4_correlated_2d() -> Outcome {
    let start = Instant::now();
    let m = model("sq-exp-2d");
    let s = TheorySettings::default();
    let nearest = wk_exact_all(4, 1.5, &m, Connectivity::Nearest, &s).map_err(|e| e.to_string())?;
    let moore = wk_exact_all(2, 1.5, &m, Connectivity::Moore, &s).map_err(|e| e.to_string())?;
    let mut tc = TableCheck::new(4, 5e-4);
    for (k, est) in nearest.iter().enumerate() {
        let printed = tc.table.block(1.5).unwrap().rows[k].w.unwrap().value;
        tc.compare(1.5, Column::W, k + 1, est.value, printed);
    }
    let mut tc5 = TableCheck::new(5, 5e-4);
    for (k, est) in moore.iter().enumerate() {
        let printed = tc5.table.block(1.5).unwrap().rows[k].w.unwrap().value;
        tc5.compare(1.5, Column::W, k + 1, est.value, printed);
    }
    within_time(start, Duration::from_secs(600))?;
    let a = tc.finish()?;
    let b = tc5.finish()?;
    let fmt = |v: &[csd_core::mvnprob::ProbEstimate]| {
        v.iter()
            .map(|e| format!("{:.5}", e.value))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(format!(
        "nearest [{}] ({a}); moore [{}] ({b})",
        fmt(&nearest),
        fmt(&moore)
    ))
}

fn c5_peak_denominators() -> Outcome {
    let s = TheorySettings::default();
    let cases = [
        ("wn1d", Connectivity::Nearest, 2),
        ("wn2d", Connectivity::Nearest, 4),
        ("wn2d", Connectivity::Moore, 8),
    ];
    for u in [0.5, 1.5, -1.0, 3.0] {
        let p = phi(u);
        for (name, conn, n) in cases {
            let m = model(name);
            let t = Site::origin(m.dim());
            let ours = peak_denominator_at(&t, u, &m, conn, &s)
                .map_err(|e| e.to_string())?
                .value;
            let formula = (1.0 - p.powi(n + 1)) / (n as f64 + 1.0);
            check(
                (ours - formula).abs() <= 1e-12,
                format!("{name} {conn} u={u}: {ours} vs {formula}"),
            )?;
        }
    }
    Ok("(1-p^3)/3, (1-p^5)/5, (1-p^9)/9 reproduced to 1e-12".into())
}

fn c6_estimator_identity() -> Outcome {
    let plan = SimulationPlan::new(
        model("sq-exp-2d"),
        Window::from_extents(&[41, 41], true).map_err(|e| e.to_string())?,
        0.5,
        Connectivity::Nearest,
        1000,
        DEFAULT_SEED,
    )
    .with_subwindow(Window::from_extents(&[1, 1], true).map_err(|e| e.to_string())?);
    let summary = simulate_and_count(&plan).map_err(|e| e.to_string())?;
    let origin = summary
        .result(Estimator::McOrigin)
        .map_err(|e| e.to_string())?;
    let refined = summary
        .result(Estimator::McRefined)
        .map_err(|e| e.to_string())?;
    check(
        origin.rows.len() == refined.rows.len(),
        "different row sets",
    )?;
    for (a, b) in origin.rows.iter().zip(&refined.rows) {
        check(
            a.k == b.k
                && a.estimate.to_bits() == b.estimate.to_bits()
                && a.stderr.to_bits() == b.stderr.to_bits(),
            format!("k={}: {} vs {}", a.k, a.estimate, b.estimate),
        )?;
    }
    check(!origin.rows.is_empty(), "no clusters observed")?;
    Ok(format!(
        "{} rows bitwise equal over 1000 realizations",
        origin.rows.len()
    ))
}

fn c7_inside_relation() -> Outcome {
    let s = TheorySettings::default();
    let wn = model("wn2d");
    for conn in [Connectivity::Nearest, Connectivity::Moore] {
        for k in 1..=4 {
            let r = inside_consistency(k, 0.5, &wn, conn, &s).map_err(|e| e.to_string())?;
            check(
                r.consistent && r.difference == 0.0,
                format!("white noise {conn} k={k}: difference {}", r.difference),
            )?;
        }
    }
    let m = model("sq-exp-2d");
    let mut worst: f64 = 0.0;
    for conn in [Connectivity::Nearest, Connectivity::Moore] {
        for k in 1..=3 {
            let r = inside_consistency(k, 1.5, &m, conn, &s).map_err(|e| e.to_string())?;
            let z = if r.joint_stderr > 0.0 {
                r.difference.abs() / r.joint_stderr
            } else {
                0.0
            };
            worst = worst.max(z);
            check(
                r.difference.abs() <= 3.0 * r.joint_stderr + 1e-15,
                format!(
                    "gaussian {conn} k={k}: {:.2e} vs se {:.2e}",
                    r.difference, r.joint_stderr
                ),
            )?;
        }
    }
    Ok(format!(
        "white noise exact; gaussian within {worst:.2} joint stderr"
    ))
}

fn c8_high_threshold_agreement() -> Outcome {
    let s = TheorySettings::default();
    let m = model("sq-exp-1d");
    let exact = cluster_size_distribution(
        1.5,
        &m,
        Connectivity::Nearest,
        4,
        NormalizationMode::Truncated,
        &s,
    )
    .map_err(|e| e.to_string())?;
    let peak = peak_csd_1d(0, 1.5, &m, 4, &s).map_err(|e| e.to_string())?;
    let tv = total_variation(&exact.renormalized(), &peak.renormalized());
    check(tv <= 0.02, format!("total variation {tv:.4}"))?;
    Ok(format!("total variation {tv:.4}"))
}

fn c9_desk_scale_reproduction() -> Outcome {
    let start = Instant::now();
    let plan = SimulationPlan::new(
        model("wn1d"),
        Window::from_extents(&[1500], true).map_err(|e| e.to_string())?,
        0.5,
        Connectivity::Nearest,
        1000,
        DEFAULT_SEED,
    );
    let direct = empirical_wk(&plan).map_err(|e| e.to_string())?;
    let (w1, se) = (direct.estimate(1), direct.stderr(1));
    check(
        (w1 - 0.14755).abs() <= 3.0 * se,
        format!("w1 hat {w1:.5} +- {se:.5} vs .14755"),
    )?;

    let mut opts = ReproduceOptions::new(1, 0.1);
    opts.tolerance = 0.002;
    let outcome = reproduce_table(&opts).map_err(|e| e.to_string())?;
    let report = &outcome.reports[0];
    let failures: Vec<String> = report
        .failures()
        .map(|r| {
            format!(
                "u={} k={:?} {} vs {}: gap {:.2e}",
                r.u, r.k, r.quantity, r.against, r.gap
            )
        })
        .collect();
    check(report.pass(), failures.join("; "))?;
    within_time(start, Duration::from_secs(300))?;
    Ok(format!("w1 hat = {w1:.5} +- {se:.5}; {}", report.summary()))
}

// ---- brute-force shape oracle, independent of the growth enumerator

fn adjacent(a: &[i64], b: &[i64], conn: Connectivity) -> bool {
    let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect();
    match conn {
        Connectivity::Nearest => d.iter().sum::<i64>() == 1,
        Connectivity::Moore => d.iter().all(|&x| x <= 1) && d.iter().any(|&x| x > 0),
    }
}

fn exterior(shape: &BTreeSet<Vec<i64>>, conn: Connectivity) -> usize {
    let mut out = BTreeSet::new();
    for s in shape {
        for dx in -1..=1 {
            for dy in -1..=1 {
                let t = vec![s[0] + dx, s[1] + dy];
                if !shape.contains(&t) && adjacent(s, &t, conn) {
                    out.insert(t);
                }
            }
        }
    }
    out.len()
}

fn brute_force(k: usize, dim: usize, conn: Connectivity) -> BTreeSet<BTreeSet<Vec<i64>>> {
    let r = k as i64 - 1;
    let side = 2 * r + 1;
    let pool: Vec<Vec<i64>> = (0..side.pow(dim as u32))
        .map(|mut f| {
            let mut c: Vec<i64> = (0..dim)
                .map(|_| {
                    let x = f % side - r;
                    f /= side;
                    x
                })
                .collect();
            c.reverse();
            c
        })
        .filter(|c| c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect();
    let mut found = BTreeSet::new();
    let mut idx: Vec<usize> = (0..k - 1).collect();
    if k == 1 {
        found.insert(BTreeSet::from([vec![0; dim]]));
        return found;
    }
    loop {
        let mut sites = vec![vec![0; dim]];
        sites.extend(idx.iter().map(|&i| pool[i].clone()));
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
        if seen.iter().all(|&s| s) {
            found.insert(sites.into_iter().collect());
        }
        // next combination
        let n = pool.len();
        let m = idx.len();
        let Some(pos) = (0..m).rev().find(|&i| idx[i] != i + n - m) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
    found
}

fn c10_shape_counts() -> Outcome {
    let engine = |k: usize, conn: Connectivity| -> BTreeSet<BTreeSet<Vec<i64>>> {
        enumerate_rooted(k, conn, 2)
            .unwrap()
            .iter()
            .map(|s| s.sites.iter().map(|t| t.coords().to_vec()).collect())
            .collect()
    };
    for (conn, counts) in [
        (Connectivity::Nearest, &[1usize, 2, 6, 19, 63, 216][..]),
        (Connectivity::Moore, &[1, 4, 20, 110][..]),
    ] {
        for (i, &c) in counts.iter().enumerate() {
            let k = i + 1;
            let oracle = brute_force(k, 2, conn);
            check(
                oracle.len() == c,
                format!("oracle {conn} k={k}: {}", oracle.len()),
            )?;
            check(
                engine(k, conn) == oracle,
                format!("{conn} k={k}: catalogs differ"),
            )?;
        }
    }
    let set = |v: &[[i64; 2]]| v.iter().map(|s| s.to_vec()).collect::<BTreeSet<_>>();
    let o = [0, 0];
    let published = BTreeSet::from([
        set(&[o, [1, 0], [2, 0]]),
        set(&[o, [1, 0], [1, 1]]),
        set(&[o, [1, 0], [1, -1]]),
        set(&[o, [1, 0], [0, 1]]),
        set(&[o, [0, 1], [0, 2]]),
        set(&[o, [0, 1], [1, 1]]),
    ]);
    check(
        engine(3, Connectivity::Nearest) == published,
        "nearest k=3 catalog differs from the published list",
    )?;
    let moore2 = BTreeSet::from([
        set(&[o, [1, 0]]),
        set(&[o, [0, 1]]),
        set(&[o, [1, 1]]),
        set(&[o, [1, -1]]),
    ]);
    check(
        engine(2, Connectivity::Moore) == moore2,
        "moore k=2 catalog differs",
    )?;
    let moore3 = engine(3, Connectivity::Moore);
    check(
        moore3.contains(&set(&[o, [1, 1], [2, 2]])) && moore3.contains(&set(&[o, [1, 0], [2, 1]])),
        "moore k=3 misses a published shape",
    )?;
    Ok("nearest 1 2 6 19 63 216, moore 1 4 20 110; published catalogs reproduced".into())
}

fn c11_normalization() -> Outcome {
    let s = TheorySettings::default();
    let mut worst: f64 = 0.0;
    let tables = [
        cluster_size_distribution(
            0.5,
            &model("wn1d"),
            Connectivity::Nearest,
            8,
            NormalizationMode::ExactDenominator,
            &s,
        ),
        cluster_size_distribution(
            1.5,
            &model("sq-exp-1d"),
            Connectivity::Nearest,
            6,
            NormalizationMode::Truncated,
            &s,
        ),
        cluster_size_distribution(
            0.5,
            &model("wn2d"),
            Connectivity::Moore,
            4,
            NormalizationMode::Truncated,
            &s,
        ),
        peak_csd_1d(0, 0.5, &model("cos-nonstat-1d"), 5, &s),
    ];
    for t in tables {
        let t = t.map_err(|e| e.to_string())?;
        let total: f64 = t.renormalized().iter().sum();
        worst = worst.max((total - 1.0).abs());
        check(
            (total - 1.0).abs() <= 1e-9,
            format!("renormalized masses sum to {total}"),
        )?;
    }
    let wn = model("wn1d");
    for u in [0.5, 1.5, 0.0] {
        let p = phi(u);
        let sum: f64 = (1..=60).map(|k| wk_1d(k, u, &wn, &s).unwrap().value).sum();
        let target = p * (1.0 - p);
        check(
            (sum - target).abs() <= 1e-14,
            format!("u={u}: sum of w_k = {sum} vs P(X_-1 <= u, X_0 > u) = {target}"),
        )?;
    }
    let partition = wn_partition_polynomial(3);
    check(
        partition.is_constant(1),
        format!("3-site partition polynomial is {partition}"),
    )?;
    Ok(format!(
        "max |sum of masses - 1| = {worst:.1e}; denominator identity and partition exact"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        (
            "white noise on Z closed forms and reference values",
            c1_white_noise_1d,
        ),
        (
            "correlated process on Z against the reference",
            c2_correlated_1d,
        ),
        ("white noise on Z^2 polynomials", c3_white_noise_2d),
        ("correlated field on Z^2 head rows", c4_correlated_2d),
        ("white-noise peak denominators", c5_peak_denominators),
        (
            "refined estimator with n = 1 equals origin estimator",
            c6_estimator_identity,
        ),
        ("inside relation", c7_inside_relation),
        (
            "exact and peak laws agree at a high threshold",
            c8_high_threshold_agreement,
        ),
        (
            "desk-scale empirical reproduction",
            c9_desk_scale_reproduction,
        ),
        ("shape counts against brute force", c10_shape_counts),
        ("normalization and identities", c11_normalization),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} [{t:.1?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} [{t:.1?}] {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
