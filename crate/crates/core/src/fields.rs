//! Random-field models on ℤᵈ and their simulation on finite windows.
//!
//! Stationary Gaussian fields are drawn by circulant embedding on a padded
//! torus; small windows fall back to a dense Cholesky factor when the
//! embedding is not nonnegative definite. Every realization is keyed by
//! `(master seed, realization index)` through a ChaCha stream, so batches can
//! be generated in any order or in parallel with identical results.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Site, Window};
use crate::linalg::Matrix;

/// Largest window (in sites) for which a dense factorization is attempted.
pub const DENSE_FALLBACK_LIMIT: usize = 4096;

/// Minimum torus padding per axis.
pub const MIN_PADDING: usize = 8;

/// Embedding eigenvalues in [-EIGEN_CLAMP, 0) are set to zero.
pub const EIGEN_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CovarianceKernel {
    /// variance · exp(-‖h‖² / length_scale²)
    SquaredExponential { variance: f64, length_scale: f64 },
}

impl CovarianceKernel {
    /// exp(-‖h‖²)
    pub fn unit_squared_exponential() -> Self {
        CovarianceKernel::SquaredExponential {
            variance: 1.0,
            length_scale: 1.0,
        }
    }

    pub fn eval(&self, lag: &[i64]) -> f64 {
        match *self {
            CovarianceKernel::SquaredExponential {
                variance,
                length_scale,
            } => {
                let r2: f64 = lag.iter().map(|&h| (h * h) as f64).sum();
                variance * (-r2 / (length_scale * length_scale)).exp()
            }
        }
    }

    pub fn variance(&self) -> f64 {
        self.eval(&[0])
    }

    /// Lag beyond which the kernel is negligible (relative value below 1e-20).
    fn support_radius(&self) -> usize {
        match *self {
            CovarianceKernel::SquaredExponential { length_scale, .. } => {
                (6.8 * length_scale).ceil() as usize
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            CovarianceKernel::SquaredExponential {
                variance,
                length_scale,
            } => {
                format!("sq-exp(var={variance}, scale={length_scale})")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanFunction {
    /// cos(π (t₁ + … + t_d)): +1 on even sites, -1 on odd sites.
    CosPi,
}

impl MeanFunction {
    pub fn eval(&self, t: &Site) -> f64 {
        match self {
            MeanFunction::CosPi => {
                let s: i64 = t.coords().iter().sum();
                (PI * s as f64).cos()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum FieldModel {
    /// i.i.d. standard normal values.
    WhiteNoise { dim: usize },
    StationaryGaussian {
        kernel: CovarianceKernel,
        dim: usize,
    },
    /// Z = (X² + Y²)/2 − 1 for independent centered Gaussian X, Y with `kernel`.
    ChiSquared {
        kernel: CovarianceKernel,
        dim: usize,
    },
    NonstationaryGaussian {
        kernel: CovarianceKernel,
        mean: MeanFunction,
        dim: usize,
    },
}

pub const PRESETS: [&str; 6] = [
    "wn1d",
    "wn2d",
    "sq-exp-1d",
    "sq-exp-2d",
    "chisq-2d",
    "cos-nonstat-1d",
];

impl FieldModel {
    pub fn preset(name: &str) -> Result<Self> {
        let k = CovarianceKernel::unit_squared_exponential();
        match name {
            "wn1d" => Ok(FieldModel::WhiteNoise { dim: 1 }),
            "wn2d" => Ok(FieldModel::WhiteNoise { dim: 2 }),
            "sq-exp-1d" => Ok(FieldModel::StationaryGaussian { kernel: k, dim: 1 }),
            "sq-exp-2d" => Ok(FieldModel::StationaryGaussian { kernel: k, dim: 2 }),
            "chisq-2d" => Ok(FieldModel::ChiSquared { kernel: k, dim: 2 }),
            "cos-nonstat-1d" => Ok(FieldModel::NonstationaryGaussian {
                kernel: k,
                mean: MeanFunction::CosPi,
                dim: 1,
            }),
            other => Err(Error::InvalidArgument(format!(
                "unknown model preset '{other}' (expected one of {})",
                PRESETS.join(", ")
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            FieldModel::WhiteNoise { dim }
            | FieldModel::StationaryGaussian { dim, .. }
            | FieldModel::ChiSquared { dim, .. }
            | FieldModel::NonstationaryGaussian { dim, .. } => dim,
        }
    }

    pub fn is_white_noise(&self) -> bool {
        matches!(self, FieldModel::WhiteNoise { .. })
    }

    /// Whether the joint law of X_D is a Gaussian vector with known mean and
    /// covariance.
    pub fn is_gaussian(&self) -> bool {
        !matches!(self, FieldModel::ChiSquared { .. })
    }

    pub fn is_stationary(&self) -> bool {
        !matches!(self, FieldModel::NonstationaryGaussian { .. })
    }

    /// Invariance of the joint law under signed axis permutations and
    /// translations.
    pub fn is_isotropic(&self) -> bool {
        self.is_stationary()
    }

    /// Kernel of the Gaussian layer (white noise has none).
    pub fn kernel(&self) -> Option<CovarianceKernel> {
        match *self {
            FieldModel::WhiteNoise { .. } => None,
            FieldModel::StationaryGaussian { kernel, .. }
            | FieldModel::ChiSquared { kernel, .. }
            | FieldModel::NonstationaryGaussian { kernel, .. } => Some(kernel),
        }
    }

    /// Covariance of the Gaussian layer at a lag.
    pub fn gaussian_covariance(&self, lag: &[i64]) -> f64 {
        match self.kernel() {
            Some(k) => k.eval(lag),
            None => {
                if lag.iter().all(|&h| h == 0) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            FieldModel::WhiteNoise { dim } => format!("white-noise-{dim}d"),
            FieldModel::StationaryGaussian { kernel, dim } => {
                format!("gaussian-{dim}d[{}]", kernel.describe())
            }
            FieldModel::ChiSquared { kernel, dim } => {
                format!("chi-squared-{dim}d[{}]", kernel.describe())
            }
            FieldModel::NonstationaryGaussian { kernel, dim, .. } => {
                format!("gaussian-cos-mean-{dim}d[{}]", kernel.describe())
            }
        }
    }
}

impl fmt::Display for FieldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn mean_at(model: &FieldModel, t: &Site) -> f64 {
    match model {
        FieldModel::NonstationaryGaussian { mean, .. } => mean.eval(t),
        _ => 0.0,
    }
}

/// Covariance of the Gaussian layer over an ordered list of sites.
pub fn covariance_matrix(sites: &[Site], model: &FieldModel) -> Result<Matrix> {
    if !model.is_gaussian() {
        return Err(Error::Unsupported(format!(
            "{} has no joint Gaussian law",
            model.name()
        )));
    }
    gaussian_layer_covariance(sites, model)
}

/// Covariance of the underlying Gaussian components (for chi-squared fields,
/// of each of the two independent layers).
pub fn gaussian_layer_covariance(sites: &[Site], model: &FieldModel) -> Result<Matrix> {
    let dim = model.dim();
    if let Some(s) = sites.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: s.dim(),
        });
    }
    Ok(Matrix::from_fn(sites.len(), |i, j| {
        model.gaussian_covariance(sites[i].sub(&sites[j]).coords())
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub master: u64,
    pub index: u64,
}

/// Field values on a window, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub window: Window,
    pub values: Vec<f64>,
    pub model: String,
    pub seed: SeedRecord,
}

impl Realization {
    pub fn value_at(&self, t: &Site) -> Option<f64> {
        self.window.index_of(t).map(|i| self.values[i])
    }

    /// Little-endian f64 values, row-major.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.values.iter().flat_map(|v| v.to_le_bytes()).collect()
    }

    pub fn from_le_bytes(header: RealizationHeader, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != 8 * header.window.len() {
            return Err(Error::InvalidArgument(format!(
                "{} bytes do not match a window of {} sites",
                bytes.len(),
                header.window.len()
            )));
        }
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Ok(Realization {
            window: header.window,
            values,
            model: header.model,
            seed: header.seed,
        })
    }

    pub fn header(&self) -> RealizationHeader {
        RealizationHeader {
            window: self.window.clone(),
            extents: self.window.extents(),
            model: self.model.clone(),
            seed: self.seed,
            dtype: "f64-le".into(),
            order: "row-major".into(),
        }
    }
}

/// JSON sidecar for the flat binary export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationHeader {
    pub window: Window,
    pub extents: Vec<usize>,
    pub model: String,
    pub seed: SeedRecord,
    pub dtype: String,
    pub order: String,
}

/// The ChaCha stream for one realization.
pub fn realization_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

fn fast_fft_size(min: usize) -> usize {
    let mut n = min.max(1);
    loop {
        let mut m = n;
        for p in [2, 3, 5] {
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        if m == 1 {
            return n;
        }
        n += 1;
    }
}

/// Circulant embedding of a stationary kernel on a torus.
struct Embedding {
    torus: Vec<usize>,
    /// sqrt(λ / M) per torus cell, row-major.
    scale: Vec<f64>,
    ffts: Vec<Arc<dyn Fft<f64>>>,
    clamped: usize,
}

impl Embedding {
    fn new(kernel: &CovarianceKernel, extents: &[usize]) -> Result<Self> {
        let pad = MIN_PADDING.max(kernel.support_radius());
        let torus: Vec<usize> = extents.iter().map(|&n| fast_fft_size(n + pad)).collect();
        let total: usize = torus.iter().product();
        let dim = torus.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); total];
        let mut idx = vec![0usize; dim];
        for cell in buf.iter_mut() {
            let lag: Vec<i64> = idx
                .iter()
                .zip(&torus)
                .map(|(&j, &m)| j.min(m - j) as i64)
                .collect();
            *cell = Complex64::new(kernel.eval(&lag), 0.0);
            crate::lattice::advance(&mut idx, &torus);
        }
        let mut planner = FftPlanner::new();
        let ffts: Vec<Arc<dyn Fft<f64>>> =
            torus.iter().map(|&m| planner.plan_fft_forward(m)).collect();
        fft_nd(&mut buf, &torus, &ffts);
        let min = buf.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
        if min < -EIGEN_CLAMP {
            return Err(Error::EmbeddingFailed {
                min_eigenvalue: min,
            });
        }
        let mut clamped = 0;
        let scale = buf
            .iter()
            .map(|c| {
                if c.re < 0.0 {
                    clamped += 1;
                }
                (c.re.max(0.0) / total as f64).sqrt()
            })
            .collect();
        if clamped > 0 {
            log::warn!("clamped {clamped} slightly negative circulant eigenvalues to zero");
        }
        Ok(Embedding {
            torus,
            scale,
            ffts,
            clamped,
        })
    }

    /// Two independent fields on the torus (real and imaginary parts).
    fn sample(&self, rng: &mut ChaCha8Rng, buf: &mut Vec<Complex64>) {
        buf.clear();
        buf.extend(self.scale.iter().map(|&s| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(s * re, s * im)
        }));
        fft_nd(buf, &self.torus, &self.ffts);
    }
}

/// In-place d-dimensional FFT over a row-major buffer.
fn fft_nd(buf: &mut [Complex64], shape: &[usize], ffts: &[Arc<dyn Fft<f64>>]) {
    let total: usize = shape.iter().product();
    let mut stride = 1;
    for axis in (0..shape.len()).rev() {
        let m = shape[axis];
        if stride == 1 {
            ffts[axis].process(buf);
        } else {
            let mut line = vec![Complex64::new(0.0, 0.0); m];
            let block = m * stride;
            for start in (0..total).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (j, c) in line.iter_mut().enumerate() {
                        *c = buf[base + j * stride];
                    }
                    ffts[axis].process(&mut line);
                    for (j, c) in line.iter().enumerate() {
                        buf[base + j * stride] = *c;
                    }
                }
            }
        }
        stride *= m;
    }
}

enum Method {
    WhiteNoise,
    Circulant(Embedding),
    Dense(Matrix),
}

/// Reusable sampler for one (model, window) pair.
pub struct Simulator {
    model: FieldModel,
    window: Window,
    method: Method,
    means: Vec<f64>,
}

impl Simulator {
    pub fn new(model: &FieldModel, window: &Window) -> Result<Self> {
        Self::build(model, window, false)
    }

    /// Forces the dense Cholesky route (used for small patches).
    pub fn dense(model: &FieldModel, window: &Window) -> Result<Self> {
        Self::build(model, window, true)
    }

    fn build(model: &FieldModel, window: &Window, force_dense: bool) -> Result<Self> {
        if window.dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: window.dim(),
            });
        }
        let method = match model.kernel() {
            None => Method::WhiteNoise,
            Some(_) if force_dense => Method::Dense(Self::dense_factor(model, window)?),
            Some(kernel) => match Embedding::new(&kernel, &window.extents()) {
                Ok(e) => Method::Circulant(e),
                Err(err) if window.len() < DENSE_FALLBACK_LIMIT => {
                    log::warn!(
                        "{err}; using dense factorization for {} sites",
                        window.len()
                    );
                    Method::Dense(Self::dense_factor(model, window)?)
                }
                Err(err) => return Err(err),
            },
        };
        let means = window.sites().map(|t| mean_at(model, &t)).collect();
        Ok(Simulator {
            model: model.clone(),
            window: window.clone(),
            method,
            means,
        })
    }

    fn dense_factor(model: &FieldModel, window: &Window) -> Result<Matrix> {
        let sites: Vec<Site> = window.sites().collect();
        gaussian_layer_covariance(&sites, model)?.cholesky(1e-10)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn model(&self) -> &FieldModel {
        &self.model
    }

    pub fn clamped_eigenvalues(&self) -> usize {
        match &self.method {
            Method::Circulant(e) => e.clamped,
            _ => 0,
        }
    }

    /// Writes the realization with the given index into `out`.
    pub fn fill(&self, master: u64, index: u64, out: &mut Vec<f64>) {
        let mut rng = realization_rng(master, index);
        let n = self.window.len();
        out.clear();
        let two_layers = matches!(self.model, FieldModel::ChiSquared { .. });
        match &self.method {
            Method::WhiteNoise => {
                out.extend((0..n).map(|_| -> f64 { StandardNormal.sample(&mut rng) }));
                if two_layers {
                    for v in out.iter_mut() {
                        let y: f64 = StandardNormal.sample(&mut rng);
                        *v = (*v * *v + y * y) / 2.0 - 1.0;
                    }
                }
            }
            Method::Circulant(emb) => {
                let mut buf = Vec::new();
                emb.sample(&mut rng, &mut buf);
                let extents = self.window.extents();
                let mut local = vec![0usize; extents.len()];
                for _ in 0..n {
                    let ti = local
                        .iter()
                        .zip(&emb.torus)
                        .fold(0, |acc, (&c, &m)| acc * m + c);
                    let c = buf[ti];
                    out.push(if two_layers {
                        (c.re * c.re + c.im * c.im) / 2.0 - 1.0
                    } else {
                        c.re
                    });
                    crate::lattice::advance(&mut local, &extents);
                }
            }
            Method::Dense(l) => {
                let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                out.resize(n, 0.0);
                l.lower_mul(&z, out);
                if two_layers {
                    let z2: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let mut y = vec![0.0; n];
                    l.lower_mul(&z2, &mut y);
                    for (v, w) in out.iter_mut().zip(&y) {
                        *v = (*v * *v + w * w) / 2.0 - 1.0;
                    }
                }
            }
        }
        for (v, m) in out.iter_mut().zip(&self.means) {
            *v += m;
        }
    }

    pub fn realize(&self, master: u64, index: u64) -> Realization {
        let mut values = Vec::with_capacity(self.window.len());
        self.fill(master, index, &mut values);
        Realization {
            window: self.window.clone(),
            values,
            model: self.model.name(),
            seed: SeedRecord { master, index },
        }
    }
}

/// One realization of `model` on `window` for a master seed.
pub fn simulate(model: &FieldModel, window: &Window, seed: u64) -> Result<Realization> {
    Ok(Simulator::new(model, window)?.realize(seed, 0))
}
