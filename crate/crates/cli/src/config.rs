//! Experiment configuration: TOML file sections merged under command-line
//! flags, then resolved against preset defaults and validated.

use std::path::Path;

use serde::{Deserialize, Serialize};

use csd_core::empirical::{BoundaryPolicy, Estimator};
use csd_core::fields::{CovarianceKernel, FieldModel};
use csd_core::lattice::{Connectivity, Site, Window};
use csd_core::theory::NormalizationMode;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Overrides for the squared-exponential kernel of a preset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub variance: Option<f64>,
    pub length_scale: Option<f64>,
}

/// Every setting optional; one instance per source (file section, flags).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialConfig {
    pub preset: Option<String>,
    pub kernel: Option<KernelSpec>,
    pub d: Option<usize>,
    pub connectivity: Option<String>,
    pub u: Option<Vec<f64>>,
    pub k_max: Option<usize>,
    pub k: Option<usize>,
    pub exact_k_max: Option<usize>,
    pub mode: Option<String>,
    pub peak: Option<bool>,
    pub anchor: Option<Vec<i64>>,
    pub realizations: Option<u64>,
    pub window: Option<String>,
    pub subwindow: Option<String>,
    pub estimator: Option<String>,
    pub policy: Option<String>,
    pub seed: Option<u64>,
    pub qmc_rel_tol: Option<f64>,
    pub qmc_abs_tol: Option<f64>,
    pub mc_draws: Option<u64>,
    pub tail_realizations: Option<u64>,
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
    pub stream_every: Option<u64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl PartialConfig {
    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &PartialConfig) -> Self {
        overlay!(
            self,
            top,
            preset,
            kernel,
            d,
            connectivity,
            u,
            k_max,
            k,
            exact_k_max,
            mode,
            peak,
            anchor,
            realizations,
            window,
            subwindow,
            estimator,
            policy,
            seed,
            qmc_rel_tol,
            qmc_abs_tol,
            mc_draws,
            tail_realizations,
            tolerance,
            format,
            stream_every
        );
        self
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    model: PartialConfig,
    experiment: PartialConfig,
    simulation: PartialConfig,
    numerics: PartialConfig,
    output: PartialConfig,
}

/// Reads a TOML file with sections [model], [experiment], [simulation],
/// [numerics] and [output]; later sections win on repeated keys.
pub fn read_config_file(path: &Path) -> Result<PartialConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<PartialConfig, CliError> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
    Ok(PartialConfig::default()
        .overlay(&file.model)
        .overlay(&file.experiment)
        .overlay(&file.simulation)
        .overlay(&file.numerics)
        .overlay(&file.output))
}

/// Fully resolved experiment settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub preset: String,
    pub model: FieldModel,
    pub d: usize,
    pub connectivity: Connectivity,
    pub u: Vec<f64>,
    pub k_max: usize,
    pub k: Option<usize>,
    pub exact_k_max: usize,
    pub mode: NormalizationMode,
    pub peak: bool,
    pub anchor: Vec<i64>,
    pub realizations: u64,
    pub window: Vec<usize>,
    pub subwindow: Option<Vec<usize>>,
    pub estimator: Estimator,
    pub policy: BoundaryPolicy,
    pub seed: u64,
    pub qmc_rel_tol: f64,
    /// Absolute standard-error floor per probability.
    pub qmc_abs_tol: f64,
    pub mc_draws: u64,
    pub tail_realizations: u64,
    pub tolerance: f64,
    pub format: Format,
    pub stream_every: Option<u64>,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Small enough that the errors of a few hundred shape probabilities stay
/// far below the table tolerances.
pub const DEFAULT_QMC_ABS_TOL: f64 = 1e-8;

/// Parses "100x100", "1500" or "50X50".
pub fn parse_dims(s: &str, d: usize) -> Result<Vec<usize>, CliError> {
    let parts: Vec<usize> = s
        .split(['x', 'X'])
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid dimensions '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    match parts.len() {
        1 => Ok(vec![parts[0]; d]),
        n if n == d => Ok(parts),
        n => Err(CliError::Usage(format!(
            "'{s}' has {n} extents but d = {d}"
        ))),
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn build_model(
    preset: &str,
    d: Option<usize>,
    kernel: Option<KernelSpec>,
) -> Result<FieldModel, CliError> {
    let unit = CovarianceKernel::unit_squared_exponential();
    let generic_dim = d.unwrap_or(2);
    let mut model = match preset {
        "wn" | "white-noise" => FieldModel::WhiteNoise { dim: generic_dim },
        "sq-exp" => FieldModel::StationaryGaussian {
            kernel: unit,
            dim: generic_dim,
        },
        "chisq" => FieldModel::ChiSquared {
            kernel: unit,
            dim: generic_dim,
        },
        other => FieldModel::preset(other).map_err(usage)?,
    };
    if let Some(d) = d {
        if d != model.dim() {
            return Err(CliError::Usage(format!(
                "preset '{preset}' is {}-dimensional but d = {d}",
                model.dim()
            )));
        }
    }
    if let Some(spec) = kernel {
        let apply = |k: &mut CovarianceKernel| {
            let CovarianceKernel::SquaredExponential {
                variance,
                length_scale,
            } = k;
            if let Some(v) = spec.variance {
                *variance = v;
            }
            if let Some(l) = spec.length_scale {
                *length_scale = l;
            }
        };
        match &mut model {
            FieldModel::StationaryGaussian { kernel, .. }
            | FieldModel::ChiSquared { kernel, .. }
            | FieldModel::NonstationaryGaussian { kernel, .. } => apply(kernel),
            FieldModel::WhiteNoise { .. } => {
                return Err(CliError::Usage(
                    "white noise has no kernel to override".into(),
                ));
            }
        }
    }
    Ok(model)
}

impl PartialConfig {
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let preset = self
            .preset
            .clone()
            .ok_or_else(|| CliError::Usage("a model preset is required (--preset)".into()))?;
        let model = build_model(&preset, self.d, self.kernel)?;
        let d = model.dim();
        let connectivity: Connectivity = self
            .connectivity
            .as_deref()
            .unwrap_or("nearest")
            .parse()
            .map_err(usage)?;
        let u = self.u.clone().unwrap_or_else(|| vec![0.5, 1.5]);
        let k_max = self.k_max.unwrap_or(if d == 1 { 6 } else { 4 });
        let mode: NormalizationMode = match &self.mode {
            Some(m) => m.parse().map_err(usage)?,
            None if d == 1 => NormalizationMode::ExactDenominator,
            None => NormalizationMode::TruncatedPlusMcTail,
        };
        let nonstationary = !model.is_stationary();
        let estimator: Estimator = match &self.estimator {
            Some(e) => e.parse().map_err(usage)?,
            None if nonstationary => Estimator::NonstatPeak,
            None => Estimator::Direct,
        };
        let policy: BoundaryPolicy = self
            .policy
            .as_deref()
            .unwrap_or("include-all")
            .parse()
            .map_err(usage)?;
        let window = match &self.window {
            Some(w) => parse_dims(w, d)?,
            None => vec![if d == 1 { 1500 } else { 300 }; d],
        };
        let subwindow = self
            .subwindow
            .as_deref()
            .map(|s| parse_dims(s, d))
            .transpose()?;
        let anchor = self.anchor.clone().unwrap_or_else(|| vec![0; d]);
        let cfg = ExperimentConfig {
            preset,
            model,
            d,
            connectivity,
            u,
            k_max,
            k: self.k,
            exact_k_max: self.exact_k_max.unwrap_or(6),
            mode,
            peak: self.peak.unwrap_or(false) || nonstationary,
            anchor,
            realizations: self
                .realizations
                .unwrap_or(if d == 1 { 10_000 } else { 2_000 }),
            window,
            subwindow,
            estimator,
            policy,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            qmc_rel_tol: self.qmc_rel_tol.unwrap_or(1e-4),
            qmc_abs_tol: self.qmc_abs_tol.unwrap_or(DEFAULT_QMC_ABS_TOL),
            mc_draws: self.mc_draws.unwrap_or(10_000_000),
            tail_realizations: self.tail_realizations.unwrap_or(15_000),
            tolerance: self.tolerance.unwrap_or(0.002),
            format: self.format.unwrap_or_default(),
            stream_every: self.stream_every,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if self.u.is_empty() || self.u.iter().any(|u| !u.is_finite()) {
            return bad("thresholds must be finite and at least one is required".into());
        }
        if self.k_max == 0 {
            return bad("k_max must be at least 1".into());
        }
        if self.k == Some(0) {
            return bad("k must be at least 1".into());
        }
        if self.realizations == 0 {
            return bad("at least one realization is required".into());
        }
        if self.window.contains(&0) {
            return bad("window extents must be positive".into());
        }
        if self.anchor.len() != self.d {
            return bad(format!(
                "anchor has {} coordinates but d = {}",
                self.anchor.len(),
                self.d
            ));
        }
        if !(self.qmc_rel_tol > 0.0) {
            return bad("qmc_rel_tol must be positive".into());
        }
        if !(self.qmc_abs_tol >= 0.0) {
            return bad("qmc_abs_tol must be nonnegative".into());
        }
        if self.mc_draws == 0 || self.tail_realizations == 0 {
            return bad("Monte-Carlo sample sizes must be positive".into());
        }
        if self.tolerance < 0.0 {
            return bad("tolerance must be nonnegative".into());
        }
        if self.mode == NormalizationMode::ExactDenominator && self.d != 1 {
            return bad("the exact-denominator mode is only available for d = 1".into());
        }
        if let Some(sub) = &self.subwindow {
            let outer = self.window()?;
            let inner = Window::from_extents(sub, true).map_err(usage)?;
            if !outer.strictly_contains(&inner) {
                return bad(format!(
                    "subwindow {} is not strictly inside window {}",
                    inner.describe(),
                    outer.describe()
                ));
            }
        }
        if matches!(self.estimator, Estimator::McRefined | Estimator::McPeak)
            && self.subwindow.is_none()
        {
            return bad(format!("estimator {} needs --sub", self.estimator));
        }
        if self.estimator == Estimator::NonstatPeak && self.model.is_stationary() {
            return bad("estimator nonstat-peak needs the cos-nonstat-1d preset".into());
        }
        Ok(())
    }

    pub fn window(&self) -> Result<Window, CliError> {
        Window::from_extents(&self.window, true).map_err(usage)
    }

    pub fn subwindow(&self) -> Result<Option<Window>, CliError> {
        self.subwindow
            .as_ref()
            .map(|s| Window::from_extents(s, true).map_err(usage))
            .transpose()
    }

    pub fn anchor_site(&self) -> Site {
        Site::new(self.anchor.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_config(
            "[model]\npreset = \"wn1d\"\n[experiment]\nu = [0.5]\nk_max = 3\n[simulation]\nrealizations = 50\nwindow = \"200\"\n",
        )
        .unwrap();
        let flags = PartialConfig {
            k_max: Some(5),
            ..PartialConfig::default()
        };
        let cfg = file.overlay(&flags).resolve().unwrap();
        assert_eq!(cfg.k_max, 5);
        assert_eq!(cfg.u, vec![0.5]);
        assert_eq!(cfg.window, vec![200]);
        assert_eq!(cfg.realizations, 50);
        assert_eq!(cfg.mode, NormalizationMode::ExactDenominator);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_config("[model]\nfoo = 1\n").is_err());
    }

    #[test]
    fn dims() {
        assert_eq!(parse_dims("100x50", 2).unwrap(), vec![100, 50]);
        assert_eq!(parse_dims("30", 2).unwrap(), vec![30, 30]);
        assert!(parse_dims("3x3x3", 2).is_err());
    }

    #[test]
    fn validation_happens_before_work() {
        let p = PartialConfig {
            preset: Some("sq-exp-2d".into()),
            window: Some("20x20".into()),
            subwindow: Some("20x20".into()),
            ..PartialConfig::default()
        };
        assert!(matches!(p.resolve(), Err(CliError::Usage(_))));
        let p = PartialConfig {
            preset: Some("wn2d".into()),
            mode: Some("exact".into()),
            ..PartialConfig::default()
        };
        assert!(p.resolve().is_err());
    }

    #[test]
    fn kernel_override() {
        let p = PartialConfig {
            preset: Some("sq-exp-1d".into()),
            kernel: Some(KernelSpec {
                variance: None,
                length_scale: Some(2.0),
            }),
            ..PartialConfig::default()
        };
        let cfg = p.resolve().unwrap();
        assert_eq!(
            cfg.model.kernel(),
            Some(CovarianceKernel::SquaredExponential {
                variance: 1.0,
                length_scale: 2.0
            })
        );
    }
}
