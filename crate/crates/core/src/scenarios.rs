//! Experimental worlds: correlation models, signal/noise samplers, synthesized
//! observations and the catalog of named experiments.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::LinearModel;
use crate::numerics::{bessel_j0, DenseMatrix};
use crate::rmt::CorrelationSpectrum;

/// Deterministic random stream `stream` of the generator seeded by `seed`.
///
/// Streams are independent ChaCha keystreams, so a Monte-Carlo trial keyed by
/// its index draws the same numbers under any thread schedule.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Left-correlation model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorrelationModel {
    /// `Psi^{1/2} = diag(psi)`, `psi_i ~ U(0, 1)`.
    DiagUniform,
    /// `[Psi]_ij = J0(pi |i - j|^2)`.
    Bessel,
    /// `[Psi]_ij = rho^{|i - j|^2}`, `rho in [0, 1)`.
    Exponential {
        rho: f64,
    },
    Identity,
}

/// A correlation model instantiated at a dimension (and seed, for the random model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSpec {
    pub model: CorrelationModel,
    pub m: usize,
    pub seed: u64,
}

impl CorrelationSpec {
    pub fn new(model: CorrelationModel, m: usize, seed: u64) -> Self {
        Self { model, m, seed }
    }
}

/// Dense `Psi` for the deterministic models.
pub fn correlation_matrix(model: CorrelationModel, m: usize) -> Result<DenseMatrix> {
    let entry: Box<dyn Fn(usize) -> f64> = match model {
        CorrelationModel::Bessel => Box::new(|d| bessel_j0(PI * (d * d) as f64)),
        CorrelationModel::Exponential { rho } => {
            if !(0.0..1.0).contains(&rho) {
                return Err(Error::InvalidInput(format!(
                    "exponential correlation needs rho in [0, 1), got {rho}"
                )));
            }
            // powi(0) == 1 also for rho == 0
            Box::new(move |d| rho.powi((d * d) as i32))
        }
        CorrelationModel::Identity => Box::new(|d| if d == 0 { 1.0 } else { 0.0 }),
        CorrelationModel::DiagUniform => {
            return Err(Error::InvalidInput(
                "the diagonal-uniform model is random; use build_correlation".into(),
            ))
        }
    };
    Ok(DenseMatrix::from_fn(m, m, |i, j| entry(i.abs_diff(j))))
}

pub fn build_correlation(spec: &CorrelationSpec) -> Result<CorrelationSpectrum> {
    if spec.m == 0 {
        return Err(Error::InvalidInput(
            "correlation dimension must be positive".into(),
        ));
    }
    match spec.model {
        CorrelationModel::DiagUniform => {
            let mut rng = rng_stream(spec.seed, u64::MAX);
            let q = (0..spec.m)
                .map(|_| {
                    let psi: f64 = rng.random();
                    psi * psi
                })
                .collect();
            CorrelationSpectrum::from_diagonal(q)
        }
        CorrelationModel::Identity => CorrelationSpectrum::from_diagonal(vec![1.0; spec.m]),
        model => CorrelationSpectrum::from_dense(&correlation_matrix(model, spec.m)?),
    }
}

/// Zero-mean i.i.d. entry distribution for the signal or the noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryDistribution {
    Gaussian {
        variance: f64,
    },
    /// Uniform on `[-half_width, half_width]`.
    Uniform {
        half_width: f64,
    },
    /// Student-t with `dof > 2` degrees of freedom.
    StudentT {
        dof: f64,
    },
}

pub type SignalSpec = EntryDistribution;
pub type NoiseSpec = EntryDistribution;

impl EntryDistribution {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EntryDistribution::Gaussian { variance } => variance >= 0.0 && variance.is_finite(),
            EntryDistribution::Uniform { half_width } => {
                half_width >= 0.0 && half_width.is_finite()
            }
            EntryDistribution::StudentT { dof } => dof > 2.0 && dof.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid distribution {self:?}"
            )))
        }
    }

    pub fn implied_variance(&self) -> f64 {
        match *self {
            EntryDistribution::Gaussian { variance } => variance,
            EntryDistribution::Uniform { half_width } => half_width * half_width / 3.0,
            EntryDistribution::StudentT { dof } => dof / (dof - 2.0),
        }
    }

    pub fn sample_vec<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Vec<f64> {
        match *self {
            EntryDistribution::Gaussian { variance } => {
                let sd = variance.sqrt();
                (0..len)
                    .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
                    .collect()
            }
            EntryDistribution::Uniform { half_width } => (0..len)
                .map(|_| half_width * (2.0 * rng.random::<f64>() - 1.0))
                .collect(),
            EntryDistribution::StudentT { dof } => {
                let t = StudentT::new(dof).expect("validated degrees of freedom");
                (0..len).map(|_| t.sample(rng)).collect()
            }
        }
    }
}

/// One draw of the unknowns together with their nominal variances.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub x0: Vec<f64>,
    pub n: Vec<f64>,
    pub sigma_x2: f64,
    pub sigma_n2: f64,
}

impl GroundTruth {
    pub fn snr_linear(&self) -> f64 {
        self.sigma_x2 / self.sigma_n2
    }

    pub fn snr_true_db(&self) -> f64 {
        10.0 * self.snr_linear().log10()
    }
}

pub fn sample_truth<R: Rng + ?Sized>(
    signal: &SignalSpec,
    noise: &NoiseSpec,
    m: usize,
    k: usize,
    rng: &mut R,
) -> Result<GroundTruth> {
    signal.validate()?;
    noise.validate()?;
    let x0 = signal.sample_vec(rng, k);
    let n = noise.sample_vec(rng, m);
    Ok(GroundTruth {
        x0,
        n,
        sigma_x2: signal.implied_variance(),
        sigma_n2: noise.implied_variance(),
    })
}

/// Standard Gaussian `M x K` matrix.
pub fn sample_wbar<R: Rng + ?Sized>(rng: &mut R, m: usize, k: usize) -> DenseMatrix {
    DenseMatrix::from_fn(m, k, |_, _| rng.sample(StandardNormal))
}

/// Draws `Wbar` and forms `y = Psi^{1/2} Wbar x0 + n`.
pub fn synthesize<R: Rng + ?Sized>(
    spec: Arc<CorrelationSpectrum>,
    truth: &GroundTruth,
    rng: &mut R,
) -> Result<LinearModel> {
    let m = spec.dim();
    let k = truth.x0.len();
    if truth.n.len() != m {
        return Err(Error::Dimension(format!(
            "noise has {} entries but the correlation matrix is {m}x{m}",
            truth.n.len()
        )));
    }
    let wbar = sample_wbar(rng, m, k);
    synthesize_with(spec, wbar, truth)
}

/// `y = Psi^{1/2} Wbar x0 + n` for a given `Wbar`.
pub fn synthesize_with(
    spec: Arc<CorrelationSpectrum>,
    wbar: DenseMatrix,
    truth: &GroundTruth,
) -> Result<LinearModel> {
    let w = spec.apply_sqrt(&wbar)?;
    let signal = w.matvec(&truth.x0)?;
    if truth.n.len() != signal.len() {
        return Err(Error::Dimension("noise length does not match M".into()));
    }
    let y = signal.iter().zip(&truth.n).map(|(s, n)| s + n).collect();
    LinearModel::with_design(w, wbar, spec, y)
}

/// Which variance a scenario varies to sweep the SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptVariance {
    /// Gaussian signal whose variance is set from the fixed noise variance.
    Signal,
    /// Gaussian noise whose variance is set from the fixed signal variance.
    Noise,
    /// Neither; both distributions are fixed.
    None,
}

/// Full description of a named experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub correlation: CorrelationModel,
    /// `(M, K)` pairs; the first is the default.
    pub dims: Vec<(usize, usize)>,
    /// Regularization grids; the first is the default.
    pub lambda_grids: Vec<Vec<f64>>,
    /// Distribution held fixed during the sweep (or both, when nothing is swept).
    pub signal: SignalSpec,
    pub noise: NoiseSpec,
    pub swept: SweptVariance,
    pub snr_points_db: Vec<f64>,
}

/// Default regularization grid `{1, 2, 3, 4} x 1e-3`.
pub const DEFAULT_LAMBDAS: [f64; 4] = [1e-3, 2e-3, 3e-3, 4e-3];

pub fn default_snr_grid() -> Vec<f64> {
    (0..13).map(|i| -4.0 + 2.0 * i as f64).collect()
}

/// `n` logarithmically spaced values from `lo` to `hi`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

pub const SCENARIO_NAMES: [&str; 8] = ["a", "b", "c", "d", "g", "h", "i", "fig1"];

pub fn scenario_catalog(name: &str) -> Result<Scenario> {
    let base = Scenario {
        name: name.to_string(),
        correlation: CorrelationModel::DiagUniform,
        dims: vec![(80, 40)],
        lambda_grids: vec![DEFAULT_LAMBDAS.to_vec()],
        signal: EntryDistribution::Gaussian { variance: 1.0 },
        noise: EntryDistribution::Gaussian { variance: 0.1 },
        swept: SweptVariance::Signal,
        snr_points_db: default_snr_grid(),
    };
    let scenario = match name {
        "a" => base,
        "b" => Scenario {
            correlation: CorrelationModel::Bessel,
            noise: EntryDistribution::Uniform { half_width: 3.0 },
            ..base
        },
        "c" => Scenario {
            correlation: CorrelationModel::Exponential { rho: 0.4 },
            signal: EntryDistribution::Uniform { half_width: 5.0 },
            noise: EntryDistribution::Gaussian { variance: 1.0 },
            swept: SweptVariance::Noise,
            ..base
        },
        "d" => Scenario {
            correlation: CorrelationModel::Exponential { rho: 0.4 },
            signal: EntryDistribution::StudentT { dof: 5.0 },
            noise: EntryDistribution::Gaussian { variance: 1.0 },
            swept: SweptVariance::Noise,
            ..base
        },
        "g" => Scenario {
            dims: vec![(10, 7), (20, 10), (40, 20), (80, 40)],
            ..base
        },
        "h" => Scenario {
            dims: vec![(31, 30), (30, 35)],
            ..base
        },
        "i" => Scenario {
            lambda_grids: vec![
                DEFAULT_LAMBDAS.to_vec(),
                vec![1e-2, 2e-2, 3e-2, 4e-2],
                vec![0.5, 1.0, 5.0, 10.0],
            ],
            ..scenario_catalog("b")?
        },
        "fig1" => Scenario {
            dims: vec![(300, 100)],
            lambda_grids: vec![log_space(1e-3, 1e2, 20)],
            signal: EntryDistribution::Gaussian { variance: 10.0 },
            noise: EntryDistribution::Gaussian { variance: 1.0 },
            swept: SweptVariance::None,
            snr_points_db: vec![10.0],
            ..base
        },
        other => {
            return Err(Error::Config(format!(
                "unknown scenario '{other}' (known: {})",
                SCENARIO_NAMES.join(", ")
            )))
        }
    };
    Ok(Scenario {
        name: name.to_string(),
        ..scenario
    })
}

impl Scenario {
    /// Signal and noise distributions realizing `snr_db`.
    pub fn distributions_at(&self, snr_db: f64) -> (SignalSpec, NoiseSpec) {
        let snr = 10f64.powf(snr_db / 10.0);
        match self.swept {
            SweptVariance::Signal => (
                EntryDistribution::Gaussian {
                    variance: snr * self.noise.implied_variance(),
                },
                self.noise,
            ),
            SweptVariance::Noise => (
                self.signal,
                EntryDistribution::Gaussian {
                    variance: self.signal.implied_variance() / snr,
                },
            ),
            SweptVariance::None => (self.signal, self.noise),
        }
    }

    pub fn default_dims(&self) -> (usize, usize) {
        self.dims[0]
    }

    pub fn default_lambdas(&self) -> &[f64] {
        &self.lambda_grids[0]
    }
}
