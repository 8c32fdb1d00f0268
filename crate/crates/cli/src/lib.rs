//! Command-line front end: presets, table reproduction and comparison reports.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod reference;
pub mod report;

use commands::{Artifact, Outcome, ReproduceOptions};
use config::{Format, PartialConfig};
use csd_core::lattice::Connectivity;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_COMPARISON_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<csd_core::Error> for CliError {
    fn from(e: csd_core::Error) -> Self {
        use csd_core::Error as E;
        match e {
            E::Indefinite { .. } | E::EmbeddingFailed { .. } | E::TooManyVariables(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "csd",
    version,
    about = "Cluster size distributions of lattice excursion sets"
)]
pub struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for output files; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with [model], [experiment], [simulation], [numerics] and [output] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count (and optionally list) rooted lattice animals.
    Shapes {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "nearest")]
        conn: Connectivity,
        #[arg(long = "kmax", default_value_t = 4)]
        k_max: usize,
        /// Also emit the full catalog for each k.
        #[arg(long)]
        list: bool,
    },
    /// Theoretical cluster size distribution.
    Theory(ExperimentArgs),
    /// Simulation-based estimates.
    Estimate(ExperimentArgs),
    /// Theory against simulation with a pass/fail gate.
    Compare(ExperimentArgs),
    /// Rerun a reference table at a reduced realization count.
    ReproduceTable(ReproduceArgs),
}

#[derive(Debug, Default, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub conn: Option<String>,
    /// Threshold; repeat or separate with commas for several.
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<f64>,
    #[arg(long = "kmax")]
    pub k_max: Option<usize>,
    /// Restrict estimator output to one cluster size.
    #[arg(short = 'k')]
    pub k: Option<usize>,
    /// exact-denominator, truncated or truncated-plus-mc-tail.
    #[arg(long)]
    pub mode: Option<String>,
    /// Peak-based distribution instead of the exact one.
    #[arg(long)]
    pub peak: bool,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub anchor: Vec<i64>,
    #[arg(short = 'M', long)]
    pub realizations: Option<u64>,
    /// Window side length, shorthand for --window N.
    #[arg(short = 'N')]
    pub side: Option<usize>,
    /// Window extents such as 300x300.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long = "sub")]
    pub subwindow: Option<String>,
    #[arg(long)]
    pub estimator: Option<String>,
    /// include-all or exclude-touching.
    #[arg(long)]
    pub policy: Option<String>,
    #[arg(long)]
    pub qmc_rel_tol: Option<f64>,
    #[arg(long)]
    pub qmc_abs_tol: Option<f64>,
    #[arg(long)]
    pub mc_draws: Option<u64>,
    #[arg(long)]
    pub tail_realizations: Option<u64>,
    #[arg(long = "tol")]
    pub tolerance: Option<f64>,
    /// Emit partial estimates every this many realizations.
    #[arg(long)]
    pub stream_every: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Table id, 1 to 7.
    pub table: u8,
    /// Fraction of the reference realization count, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Gate for simulated values (default 0.002 in 1D, 0.005 in 2D).
    #[arg(long = "tol")]
    pub tolerance: Option<f64>,
    /// Gate for theory against the printed reference values.
    #[arg(long, default_value_t = 5e-4)]
    pub reference_tol: f64,
    #[arg(long, default_value_t = 6)]
    pub exact_k_max: usize,
    #[arg(long)]
    pub exact_peak_k_max: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    pub qmc_rel_tol: f64,
    #[arg(long, default_value_t = config::DEFAULT_QMC_ABS_TOL)]
    pub qmc_abs_tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub mc_draws: u64,
    #[arg(long, default_value_t = 15_000)]
    pub tail_realizations: u64,
    /// Boundary policy for the simulated columns: include-all or exclude-touching.
    #[arg(long, default_value = "include-all")]
    pub policy: String,
}

impl ExperimentArgs {
    fn to_partial(&self) -> PartialConfig {
        let window = match (&self.window, self.side) {
            (Some(w), _) => Some(w.clone()),
            (None, Some(n)) => Some(n.to_string()),
            (None, None) => None,
        };
        PartialConfig {
            preset: self.preset.clone(),
            d: self.d,
            connectivity: self.conn.clone(),
            u: (!self.u.is_empty()).then(|| self.u.clone()),
            k_max: self.k_max,
            k: self.k,
            mode: self.mode.clone(),
            peak: self.peak.then_some(true),
            anchor: (!self.anchor.is_empty()).then(|| self.anchor.clone()),
            realizations: self.realizations,
            window,
            subwindow: self.subwindow.clone(),
            estimator: self.estimator.clone(),
            policy: self.policy.clone(),
            qmc_rel_tol: self.qmc_rel_tol,
            qmc_abs_tol: self.qmc_abs_tol,
            mc_draws: self.mc_draws,
            tail_realizations: self.tail_realizations,
            tolerance: self.tolerance,
            stream_every: self.stream_every,
            ..PartialConfig::default()
        }
    }
}

fn global_partial(cli: &Cli) -> Result<PartialConfig, CliError> {
    let file = match &cli.config {
        Some(path) => config::read_config_file(path)?,
        None => PartialConfig::default(),
    };
    let globals = PartialConfig {
        seed: cli.seed,
        format: cli.format,
        ..PartialConfig::default()
    };
    Ok(file.overlay(&globals))
}

fn emit(out: Option<&Path>, artifact: &Artifact) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(&artifact.name), &artifact.contents)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "## {}", artifact.name)?;
            stdout.write_all(artifact.contents.as_bytes())?;
            if !artifact.contents.ends_with('\n') {
                writeln!(stdout)?;
            }
        }
    }
    Ok(())
}

/// Runs a parsed command and returns its outcome without writing anything.
pub fn execute(cli: &Cli, on_partial: impl FnMut(Artifact)) -> Result<Outcome, CliError> {
    let base = global_partial(cli)?;
    match &cli.command {
        Command::Shapes {
            d,
            conn,
            k_max,
            list,
        } => commands::shapes(*k_max, *conn, *d, *list, base.format.unwrap_or(Format::Csv)),
        Command::Theory(args) => commands::theory(&base.overlay(&args.to_partial()).resolve()?),
        Command::Estimate(args) => {
            commands::estimate(&base.overlay(&args.to_partial()).resolve()?, on_partial)
        }
        Command::Compare(args) => commands::compare(&base.overlay(&args.to_partial()).resolve()?),
        Command::ReproduceTable(args) => {
            let mut opts = ReproduceOptions::new(args.table, args.scale);
            if let Some(tol) = args.tolerance {
                opts.tolerance = tol;
            }
            opts.reference_tolerance = args.reference_tol;
            opts.exact_k_max = args.exact_k_max;
            opts.exact_peak_k_max = args.exact_peak_k_max.unwrap_or(args.exact_k_max);
            opts.qmc_rel_tol = args.qmc_rel_tol;
            opts.qmc_abs_tol = args.qmc_abs_tol;
            opts.mc_draws = args.mc_draws;
            opts.tail_realizations = args.tail_realizations;
            opts.policy = args.policy.parse()?;
            if let Some(seed) = base.seed {
                opts.seed = seed;
            }
            if let Some(format) = base.format {
                opts.format = format;
            }
            commands::reproduce_table(&opts)
        }
    }
}

/// Runs a command, writes its outputs and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let out = cli.out.clone();
    let mut partial_error = None;
    let outcome = execute(cli, |a| {
        if let Err(e) = emit(out.as_deref(), &a) {
            partial_error.get_or_insert(e);
        }
    });
    let result = outcome.and_then(|o| {
        if let Some(e) = partial_error {
            return Err(e);
        }
        for a in &o.artifacts {
            emit(out.as_deref(), a)?;
        }
        for r in &o.reports {
            eprintln!("{}", r.summary());
        }
        Ok(o.verdict)
    });
    match result {
        Ok(Some(false)) => EXIT_COMPARISON_FAILED,
        Ok(_) => EXIT_PASS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
