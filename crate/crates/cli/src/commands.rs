//! Subcommand implementations. Each returns the files it produced and, for
//! comparisons, the verdict.

use serde::Serialize;
use serde_json::json;

use csd_core::empirical::{
    simulate_and_count, simulate_streaming, BoundaryPolicy, CountingResult, Estimator,
    SimulationPlan,
};
use csd_core::fields::FieldModel;
use csd_core::lattice::{Connectivity, Site, Window};
use csd_core::mvnprob::{ProbEstimate, ProbabilitySettings, QmcSettings};
use csd_core::shapes::{CatalogExport, EnumerationCap, ShapeCatalog};
use csd_core::theory::{
    chi_squared_patch, cluster_size_distribution, denominator_1d, peak_cluster_size_distribution,
    peak_csd_1d, peak_denominator_at, wk_1d, wk_exact_all, wk_peak_all, DistributionTable,
    TailConfig, TheorySettings,
};

use crate::config::{ExperimentConfig, Format};
use crate::reference::{self, Column, RefTable};
use crate::report::{ComparisonReport, ComparisonRow};
use crate::CliError;

/// A named output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Some(verdict) when the command compares values.
    pub verdict: Option<bool>,
    pub reports: Vec<ComparisonReport>,
}

fn csv_with_provenance(config: &str, body: &str) -> String {
    format!("# config: {config}\n{body}")
}

fn fmt_u(u: f64) -> String {
    format!("{u}")
}

pub fn theory_settings(cfg: &ExperimentConfig) -> TheorySettings {
    TheorySettings {
        probability: ProbabilitySettings {
            qmc: QmcSettings {
                rel_tol: cfg.qmc_rel_tol,
                abs_tol: cfg.qmc_abs_tol,
                ..QmcSettings::default()
            },
            mc_draws: cfg.mc_draws,
            mc_seed: cfg.seed,
        },
        cap: None,
        use_symmetry: true,
        tail: Some(TailConfig {
            realizations: cfg.tail_realizations,
            seed: cfg.seed,
            ..TailConfig::default_for(cfg.d)
        }),
    }
}

// ---------------------------------------------------------------- shapes

#[derive(Serialize)]
struct ShapeCounts<'a> {
    d: usize,
    connectivity: Connectivity,
    counts: &'a [usize],
}

pub fn shapes(
    k_max: usize,
    conn: Connectivity,
    d: usize,
    list: bool,
    format: Format,
) -> Result<Outcome, CliError> {
    let catalog = ShapeCatalog::rooted(k_max, conn, d, EnumerationCap::default_for(d))?;
    let counts = catalog.counts();
    let mut artifacts = Vec::new();
    let counts_art = match format {
        Format::Csv => {
            let mut s = format!("# d={d} connectivity={conn}\nk,count\n");
            for (i, c) in counts.iter().enumerate() {
                s.push_str(&format!("{},{}\n", i + 1, c));
            }
            Artifact {
                name: format!("shapes_{conn}_d{d}.csv"),
                contents: s,
            }
        }
        Format::Json => Artifact {
            name: format!("shapes_{conn}_d{d}.json"),
            contents: serde_json::to_string_pretty(&ShapeCounts {
                d,
                connectivity: conn,
                counts: &counts,
            })
            .expect("serializes"),
        },
    };
    artifacts.push(counts_art);
    if list {
        for k in 1..=k_max {
            let export = CatalogExport::new(k, conn, d, catalog.of_size(k));
            artifacts.push(Artifact {
                name: format!("shapes_{conn}_d{d}_k{k}.json"),
                contents: serde_json::to_string(&export).expect("serializes"),
            });
        }
    }
    Ok(Outcome {
        artifacts,
        verdict: None,
        reports: Vec::new(),
    })
}

// ---------------------------------------------------------------- theory

fn table_artifacts(
    prefix: &str,
    table: &DistributionTable,
    cfg_json: &str,
    format: Format,
) -> Vec<Artifact> {
    let main = match format {
        Format::Csv => Artifact {
            name: format!("{prefix}.csv"),
            contents: csv_with_provenance(cfg_json, &table.to_csv()),
        },
        Format::Json => Artifact {
            name: format!("{prefix}.json"),
            contents: serde_json::to_string_pretty(&json!({
                "config": serde_json::from_str::<serde_json::Value>(cfg_json).expect("valid json"),
                "table": table,
            }))
            .expect("serializes"),
        },
    };
    let hist = Artifact {
        name: format!("{prefix}_hist.csv"),
        contents: csv_with_provenance(cfg_json, &table.histogram_csv()),
    };
    vec![main, hist]
}

pub fn theory(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let settings = theory_settings(cfg);
    let cfg_json = cfg.to_json();
    let mut artifacts = Vec::new();
    for &u in &cfg.u {
        let table = if cfg.peak {
            let anchor = cfg.anchor_site();
            if cfg.d == 1 {
                peak_csd_1d(cfg.anchor[0], u, &cfg.model, cfg.k_max, &settings)?
            } else {
                peak_cluster_size_distribution(
                    &anchor,
                    u,
                    &cfg.model,
                    cfg.connectivity,
                    cfg.k_max,
                    &settings,
                )?
            }
        } else {
            cluster_size_distribution(
                u,
                &cfg.model,
                cfg.connectivity,
                cfg.k_max,
                cfg.mode,
                &settings,
            )?
        };
        if table
            .rows
            .iter()
            .any(|r| r.w_stderr > 0.0 && r.w_stderr > 0.05 * r.w.abs())
        {
            log::warn!("u = {u}: some rows carry relative standard errors above 5%");
        }
        let kind = if cfg.peak { "peak" } else { "exact" };
        artifacts.extend(table_artifacts(
            &format!("theory_{}_u{}_{kind}", cfg.preset, fmt_u(u)),
            &table,
            &cfg_json,
            cfg.format,
        ));
    }
    Ok(Outcome {
        artifacts,
        verdict: None,
        reports: Vec::new(),
    })
}

// ---------------------------------------------------------------- estimate

fn plan_for(cfg: &ExperimentConfig, u: f64) -> Result<SimulationPlan, CliError> {
    let mut plan = SimulationPlan::new(
        cfg.model.clone(),
        cfg.window()?,
        u,
        cfg.connectivity,
        cfg.realizations,
        cfg.seed,
    )
    .with_policy(cfg.policy);
    if let Some(sub) = cfg.subwindow()? {
        plan = plan.with_subwindow(sub);
    }
    Ok(plan)
}

fn counting_artifact(
    name: &str,
    result: &CountingResult,
    k: Option<usize>,
    cfg_json: &str,
    format: Format,
) -> Artifact {
    let mut result = result.clone();
    if let Some(k) = k {
        result.rows.retain(|r| r.k == k);
    }
    match format {
        Format::Csv => Artifact {
            name: format!("{name}.csv"),
            contents: csv_with_provenance(cfg_json, &result.to_csv()),
        },
        Format::Json => Artifact {
            name: format!("{name}.json"),
            contents: serde_json::to_string_pretty(&json!({
                "config": serde_json::from_str::<serde_json::Value>(cfg_json).expect("valid json"),
                "result": result,
            }))
            .expect("serializes"),
        },
    }
}

/// `on_partial` receives partial aggregates when streaming is enabled.
pub fn estimate(
    cfg: &ExperimentConfig,
    mut on_partial: impl FnMut(Artifact),
) -> Result<Outcome, CliError> {
    let cfg_json = cfg.to_json();
    let mut artifacts = Vec::new();
    for &u in &cfg.u {
        let plan = plan_for(cfg, u)?;
        let name = format!("estimate_{}_{}_u{}", cfg.preset, cfg.estimator, fmt_u(u));
        let summary = match cfg.stream_every {
            Some(every) => {
                let mut failure = None;
                let summary = simulate_streaming(&plan, every, |partial| {
                    match partial.result(cfg.estimator) {
                        Ok(r) => on_partial(counting_artifact(
                            &format!("{name}_partial"),
                            &r,
                            cfg.k,
                            &cfg_json,
                            cfg.format,
                        )),
                        Err(e) => failure = Some(e),
                    }
                })?;
                if let Some(e) = failure {
                    return Err(e.into());
                }
                summary
            }
            None => simulate_and_count(&plan)?,
        };
        let result = summary.result(cfg.estimator)?;
        artifacts.push(counting_artifact(
            &name, &result, cfg.k, &cfg_json, cfg.format,
        ));
    }
    Ok(Outcome {
        artifacts,
        verdict: None,
        reports: Vec::new(),
    })
}

// ---------------------------------------------------------------- compare

struct TheoryColumns {
    w: Vec<ProbEstimate>,
    w_sum: Option<ProbEstimate>,
    peak: Vec<ProbEstimate>,
    peak_sum: ProbEstimate,
}

fn theory_columns(
    cfg: &ExperimentConfig,
    u: f64,
    settings: &TheorySettings,
) -> Result<TheoryColumns, CliError> {
    let model = &cfg.model;
    let anchor = cfg.anchor_site();
    if let FieldModel::ChiSquared { .. } = model {
        let p = &settings.probability;
        let est = chi_squared_patch(model, u, cfg.connectivity, cfg.k_max, p.mc_draws, p.mc_seed)?;
        return Ok(TheoryColumns {
            w: est.rooted,
            w_sum: None,
            peak: est.peak,
            peak_sum: est.peak_denominator,
        });
    }
    let (w, w_sum) = if !model.is_stationary() {
        (Vec::new(), None)
    } else if cfg.d == 1 {
        (
            (1..=cfg.k_max)
                .map(|k| wk_1d(k, u, model, settings))
                .collect::<Result<Vec<_>, _>>()?,
            Some(denominator_1d(u, model, settings)?),
        )
    } else {
        (
            wk_exact_all(cfg.k_max, u, model, cfg.connectivity, settings)?,
            None,
        )
    };
    let peak = wk_peak_all(cfg.k_max, &anchor, u, model, cfg.connectivity, settings)?;
    let peak_sum = peak_denominator_at(&anchor, u, model, cfg.connectivity, settings)?;
    Ok(TheoryColumns {
        w,
        w_sum,
        peak,
        peak_sum,
    })
}

pub fn compare(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let settings = theory_settings(cfg);
    let cfg_json = cfg.to_json();
    let mut report = ComparisonReport::new(
        format!("compare {} ({})", cfg.preset, cfg.connectivity),
        serde_json::from_str(&cfg_json).expect("valid json"),
    );
    for &u in &cfg.u {
        let theory = theory_columns(cfg, u, &settings)?;
        let plan = plan_for(cfg, u)?;
        let summary = simulate_and_count(&plan)?;
        let tol = cfg.tolerance;
        if cfg.model.is_stationary() {
            let direct = summary.result(Estimator::Direct)?;
            for (i, t) in theory.w.iter().enumerate() {
                let k = i + 1;
                report.push(ComparisonRow::new(
                    u,
                    Some(k),
                    "w",
                    "empirical",
                    (t.value, t.stderr),
                    (direct.estimate(k), direct.stderr(k)),
                    tol,
                ));
            }
            if let Some(s) = theory.w_sum {
                report.push(ComparisonRow::new(
                    u,
                    None,
                    "w",
                    "empirical",
                    (s.value, s.stderr),
                    (direct.total_estimate, direct.total_stderr),
                    tol,
                ));
            }
        }
        let peak_est = if cfg.model.is_stationary() {
            Estimator::DirectPeak
        } else {
            Estimator::NonstatPeak
        };
        let peaks = summary.result(peak_est)?;
        for (i, t) in theory.peak.iter().enumerate() {
            let k = i + 1;
            report.push(ComparisonRow::new(
                u,
                Some(k),
                "w-peak",
                "empirical",
                (t.value, t.stderr),
                (peaks.estimate(k), peaks.stderr(k)),
                tol,
            ));
        }
        let s = theory.peak_sum;
        report.push(ComparisonRow::new(
            u,
            None,
            "w-peak",
            "empirical",
            (s.value, s.stderr),
            (peaks.total_estimate, peaks.total_stderr),
            tol,
        ));
    }
    let artifact = report_artifact(&format!("compare_{}", cfg.preset), &report, cfg.format);
    let verdict = report.pass();
    Ok(Outcome {
        artifacts: vec![artifact],
        verdict: Some(verdict),
        reports: vec![report],
    })
}

fn report_artifact(name: &str, report: &ComparisonReport, format: Format) -> Artifact {
    match format {
        Format::Csv => Artifact {
            name: format!("{name}.csv"),
            contents: report.to_csv(),
        },
        Format::Json => Artifact {
            name: format!("{name}.json"),
            contents: report.to_json(),
        },
    }
}

// ---------------------------------------------------------------- reproduce-table

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproduceOptions {
    pub table: u8,
    /// Multiplies every realization count; window sizes are unchanged.
    pub scale: f64,
    /// Gate for simulated values against theory.
    pub tolerance: f64,
    /// Gate for theory against printed reference values.
    pub reference_tolerance: f64,
    /// Largest k evaluated exactly; larger k use the refined estimator.
    pub exact_k_max: usize,
    /// Largest k for exact peak values; larger k use the peak estimator.
    pub exact_peak_k_max: usize,
    pub qmc_rel_tol: f64,
    pub qmc_abs_tol: f64,
    pub mc_draws: u64,
    pub tail_realizations: u64,
    /// Boundary policy of the simulated empirical columns.
    pub policy: BoundaryPolicy,
    pub seed: u64,
    pub format: Format,
}

impl ReproduceOptions {
    /// Defaults: empirical gates of 0.002 in one dimension and 0.005 in two,
    /// reference gates of 5e-4.
    pub fn new(table: u8, scale: f64) -> Self {
        let dim = reference::table(table)
            .and_then(|t| FieldModel::preset(t.preset).ok())
            .map_or(1, |m| m.dim());
        ReproduceOptions {
            table,
            scale,
            tolerance: if dim == 1 { 0.002 } else { 0.005 },
            reference_tolerance: 5e-4,
            exact_k_max: 6,
            exact_peak_k_max: 6,
            qmc_rel_tol: 1e-4,
            qmc_abs_tol: crate::config::DEFAULT_QMC_ABS_TOL,
            mc_draws: 10_000_000,
            tail_realizations: 15_000,
            policy: BoundaryPolicy::IncludeAll,
            seed: crate::config::DEFAULT_SEED,
            format: Format::Csv,
        }
    }

    fn scaled(&self, m: u64) -> u64 {
        ((m as f64 * self.scale).round() as u64).max(1)
    }
}

/// One value with its standard error.
type Val = (f64, f64);

fn pe(e: &ProbEstimate) -> Val {
    (e.value, e.stderr)
}

fn ratio(a: Val, b: Val) -> Val {
    if b.0 <= 0.0 {
        return (0.0, 0.0);
    }
    let m = a.0 / b.0;
    let rel = |v: Val| if v.0 > 0.0 { v.1 / v.0 } else { 0.0 };
    (m, m * (rel(a).powi(2) + rel(b).powi(2)).sqrt())
}

struct BlockTheory {
    w: Vec<Option<Val>>,
    w_sum: Option<Val>,
    peak: Vec<Val>,
    peak_sum: Val,
}

struct BlockEmpirical {
    w: Vec<Val>,
    w_sum: Val,
    peak: Vec<Val>,
    peak_sum: Val,
}

fn block_theory(
    tbl: &RefTable,
    model: &FieldModel,
    u: f64,
    rows: usize,
    opts: &ReproduceOptions,
    settings: &TheorySettings,
) -> Result<BlockTheory, CliError> {
    let conn = tbl.connectivity;
    let dim = model.dim();
    let origin = Site::origin(dim);
    if dim == 1 {
        let peak_table = peak_csd_1d(0, u, model, rows, settings)?;
        let peak = peak_table.rows.iter().map(|r| (r.w, r.w_stderr)).collect();
        let peak_sum = pe(&peak_table.denominator);
        if !model.is_stationary() {
            return Ok(BlockTheory {
                w: vec![None; rows],
                w_sum: None,
                peak,
                peak_sum,
            });
        }
        let w = (1..=rows)
            .map(|k| wk_1d(k, u, model, settings).map(|e| Some(pe(&e))))
            .collect::<Result<Vec<_>, _>>()?;
        let w_sum = Some(pe(&denominator_1d(u, model, settings)?));
        return Ok(BlockTheory {
            w,
            w_sum,
            peak,
            peak_sum,
        });
    }

    let head = opts.exact_k_max.min(rows);
    let peak_head = opts.exact_peak_k_max.min(rows);
    let (w_head, peak_head_vals, peak_sum): (Vec<ProbEstimate>, Vec<ProbEstimate>, ProbEstimate) =
        if let FieldModel::ChiSquared { .. } = model {
            let p = &settings.probability;
            let est = chi_squared_patch(
                model,
                u,
                conn,
                head.max(peak_head).max(1),
                p.mc_draws,
                p.mc_seed,
            )?;
            (
                est.rooted[..head].to_vec(),
                est.peak[..peak_head].to_vec(),
                est.peak_denominator,
            )
        } else {
            (
                wk_exact_all(head, u, model, conn, settings)?,
                wk_peak_all(peak_head, &origin, u, model, conn, settings)?,
                peak_denominator_at(&origin, u, model, conn, settings)?,
            )
        };

    // refined and peak estimators on an interior subwindow for the remaining k
    let tail = settings.tail.clone().expect("tail settings");
    let plan = SimulationPlan::new(
        model.clone(),
        Window::from_extents(&tail.window, true)?,
        u,
        conn,
        tail.realizations,
        tail.seed,
    )
    .with_subwindow(Window::from_extents(&tail.subwindow, true)?);
    let summary = simulate_and_count(&plan)?;
    let refined = summary.result(Estimator::McRefined)?;
    let mc_peak = summary.result(Estimator::McPeak)?;

    let w = (1..=rows)
        .map(|k| {
            Some(if k <= head {
                pe(&w_head[k - 1])
            } else {
                (refined.estimate(k), refined.stderr(k))
            })
        })
        .collect();
    let peak = (1..=rows)
        .map(|k| {
            if k <= peak_head {
                pe(&peak_head_vals[k - 1])
            } else {
                (mc_peak.estimate(k), mc_peak.stderr(k))
            }
        })
        .collect();
    let head_sum = ProbEstimate::sum(&w_head);
    let (tail_v, tail_se) = refined.tail_beyond(head).expect("tracked tail");
    let w_sum = Some((
        head_sum.value + tail_v,
        (head_sum.stderr.powi(2) + tail_se.powi(2)).sqrt(),
    ));
    Ok(BlockTheory {
        w,
        w_sum,
        peak,
        peak_sum: pe(&peak_sum),
    })
}

fn block_empirical(
    tbl: &RefTable,
    model: &FieldModel,
    u: f64,
    rows: usize,
    opts: &ReproduceOptions,
) -> Result<BlockEmpirical, CliError> {
    let dim = model.dim();
    let window = Window::from_extents(&vec![tbl.side; dim], true)?;
    let plan = SimulationPlan::new(
        model.clone(),
        window,
        u,
        tbl.connectivity,
        opts.scaled(tbl.realizations),
        opts.seed,
    )
    .with_policy(opts.policy);
    let summary = simulate_and_count(&plan)?;
    let peak_est = if model.is_stationary() {
        Estimator::DirectPeak
    } else {
        Estimator::NonstatPeak
    };
    let peaks = summary.result(peak_est)?;
    let direct = summary.result(Estimator::Direct)?;
    Ok(BlockEmpirical {
        w: (1..=rows)
            .map(|k| (direct.estimate(k), direct.stderr(k)))
            .collect(),
        w_sum: (direct.total_estimate, direct.total_stderr),
        peak: (1..=rows)
            .map(|k| (peaks.estimate(k), peaks.stderr(k)))
            .collect(),
        peak_sum: (peaks.total_estimate, peaks.total_stderr),
    })
}

pub fn reproduce_table(opts: &ReproduceOptions) -> Result<Outcome, CliError> {
    let tbl = reference::table(opts.table).ok_or_else(|| {
        CliError::Usage(format!("unknown table id {} (expected 1 to 7)", opts.table))
    })?;
    if !(opts.scale > 0.0 && opts.scale <= 1.0) {
        return Err(CliError::Usage("scale must lie in (0, 1]".into()));
    }
    let model = FieldModel::preset(tbl.preset)?;
    let dim = model.dim();
    let settings = TheorySettings {
        probability: ProbabilitySettings {
            qmc: QmcSettings {
                rel_tol: opts.qmc_rel_tol,
                abs_tol: opts.qmc_abs_tol,
                ..QmcSettings::default()
            },
            mc_draws: opts.mc_draws,
            mc_seed: opts.seed,
        },
        cap: None,
        use_symmetry: true,
        tail: Some(TailConfig {
            realizations: opts.scaled(opts.tail_realizations),
            seed: opts.seed,
            ..TailConfig::default_for(dim)
        }),
    };
    let config = json!({ "options": opts, "table": tbl.title, "preset": tbl.preset, "connectivity": tbl.connectivity,
        "realizations": opts.scaled(tbl.realizations), "window": vec![tbl.side; dim] });
    let mut report =
        ComparisonReport::new(format!("table {}: {}", tbl.id, tbl.title), config.clone());
    let mut artifacts = Vec::new();
    let tol = opts.tolerance;

    for block in tbl.blocks {
        let u = block.u;
        let rows = block.rows.len();
        log::info!("table {} u = {u}: theory", tbl.id);
        let th = block_theory(tbl, &model, u, rows, opts, &settings)?;
        log::info!("table {} u = {u}: simulation", tbl.id);
        let em = block_empirical(tbl, &model, u, rows, opts)?;

        let mut push_ref =
            |k: usize, quantity: &str, column: Column, theory: Val, printed: &str| {
                let mut gate = opts
                    .reference_tolerance
                    .max(3.0 * theory.1)
                    .max(reference::rounding_slack(printed));
                // a mass w / Σw inherits the tolerance of both w and Σw:
                // δ(w/Σ) ≤ δ(1 + w/Σ)/Σ to first order
                let printed_sum = match column {
                    Column::WMass => block.sum_w.map(reference::value),
                    Column::PeakMass => Some(reference::value(block.sum_peak)),
                    _ => None,
                };
                if let Some(sum) = printed_sum {
                    let mass = reference::value(printed);
                    gate = gate.max(opts.reference_tolerance * (1.0 + mass) / sum);
                }
                let mut row = ComparisonRow::new(
                    u,
                    (k > 0).then_some(k),
                    quantity,
                    "reference",
                    theory,
                    (reference::value(printed), 0.0),
                    gate,
                );
                if let Some(e) = reference::erratum(tbl.id, u, column, k) {
                    row = row.with_note(e.note);
                }
                report.push(row);
            };
        let theory_w_mass = |k: usize| th.w[k - 1].zip(th.w_sum).map(|(w, s)| ratio(w, s));
        for r in block.rows {
            let k = r.k;
            if let (Some(entry), Some(w)) = (r.w, th.w[k - 1]) {
                push_ref(k, "w", Column::W, w, entry.value);
                if let Some(m) = theory_w_mass(k) {
                    push_ref(k, "w-mass", Column::WMass, m, entry.mass);
                }
            }
            push_ref(k, "w-peak", Column::Peak, th.peak[k - 1], r.peak.value);
            push_ref(
                k,
                "w-peak-mass",
                Column::PeakMass,
                ratio(th.peak[k - 1], th.peak_sum),
                r.peak.mass,
            );
        }
        if let (Some(s), Some(printed)) = (th.w_sum, block.sum_w) {
            push_ref(0, "w", Column::W, s, printed);
        }
        push_ref(0, "w-peak", Column::Peak, th.peak_sum, block.sum_peak);

        // simulation against theory, and simulated masses against the printed ones
        let joint = |a: Val, b: Val| tol.max(3.0 * (a.1 * a.1 + b.1 * b.1).sqrt());
        for r in block.rows {
            let k = r.k;
            if let Some(w) = th.w[k - 1] {
                let e = em.w[k - 1];
                report.push(ComparisonRow::new(
                    u,
                    Some(k),
                    "w",
                    "empirical",
                    w,
                    e,
                    joint(w, e),
                ));
            }
            let p = th.peak[k - 1];
            let e = em.peak[k - 1];
            report.push(ComparisonRow::new(
                u,
                Some(k),
                "w-peak",
                "empirical",
                p,
                e,
                joint(p, e),
            ));
            let mut mass_row = |quantity: &str, column: Column, ours: Val, printed: &str| {
                // the printed simulation used 1/scale times our realizations
                let theirs = ours.1 * opts.scale.sqrt();
                let mut row = ComparisonRow::new(
                    u,
                    Some(k),
                    quantity,
                    "reference-empirical",
                    ours,
                    (reference::value(printed), theirs),
                    joint(ours, (0.0, theirs)),
                );
                if let Some(er) = reference::erratum(tbl.id, u, column, k) {
                    row = row.with_note(er.note);
                }
                report.push(row);
            };
            if let (Some(entry), true) = (r.w_hat, model.is_stationary()) {
                mass_row(
                    "w-hat-mass",
                    Column::WHatMass,
                    ratio(em.w[k - 1], em.w_sum),
                    entry.mass,
                );
            }
            mass_row(
                "w-peak-hat-mass",
                Column::PeakHatMass,
                ratio(em.peak[k - 1], em.peak_sum),
                r.peak_hat.mass,
            );
        }
        if let Some(s) = th.w_sum {
            report.push(ComparisonRow::new(
                u,
                None,
                "w",
                "empirical",
                s,
                em.w_sum,
                joint(s, em.w_sum),
            ));
        }
        report.push(ComparisonRow::new(
            u,
            None,
            "w-peak",
            "empirical",
            th.peak_sum,
            em.peak_sum,
            joint(th.peak_sum, em.peak_sum),
        ));

        let mut hist =
            String::from("k,theory_mass,empirical_mass,theory_peak_mass,empirical_peak_mass\n");
        for k in 1..=rows {
            let tm = theory_w_mass(k).map_or(String::new(), |m| format!("{:.6e}", m.0));
            let em_mass = if model.is_stationary() {
                format!("{:.6e}", ratio(em.w[k - 1], em.w_sum).0)
            } else {
                String::new()
            };
            hist.push_str(&format!(
                "{k},{tm},{em_mass},{:.6e},{:.6e}\n",
                ratio(th.peak[k - 1], th.peak_sum).0,
                ratio(em.peak[k - 1], em.peak_sum).0
            ));
        }
        artifacts.push(Artifact {
            name: format!("table{}_u{}_hist.csv", tbl.id, fmt_u(u)),
            contents: csv_with_provenance(&config.to_string(), &hist),
        });
    }
    artifacts.insert(
        0,
        report_artifact(&format!("table{}_report", tbl.id), &report, opts.format),
    );
    let verdict = report.pass();
    Ok(Outcome {
        artifacts,
        verdict: Some(verdict),
        reports: vec![report],
    })
}
