//! Ridge-cost based SNR estimation and the maximum-likelihood comparator.
//!
//! The normalized ridge cost `Phi(lambda)` of a single observation is matched
//! against its deterministic equivalent `xi1(lambda) sigma_x^2 +
//! xi2(lambda) sigma_n^2` at several `lambda`; the resulting overdetermined
//! two-unknown system is solved under nonnegativity.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{nnls_2var, norm2_sq, Cholesky, DenseMatrix};
use crate::rmt::{coefficients, CorrelationSpectrum, DeterministicEquivalents};

/// Bounds on `K / M` accepted by [`LinearModel::new`].
pub const MIN_ASPECT: f64 = 0.01;
pub const MAX_ASPECT: f64 = 100.0;

/// Regularization substituted for `lambda = 0` in the least-squares fit of
/// the ML comparator.
pub const ML_LAMBDA: f64 = 1e-10;

/// Relative residual below which a wide least-squares fit counts as exact.
pub const ML_INTERPOLATION_TOL: f64 = 1e-6;

/// `y = Psi^{1/2} Wbar x0 + n` with known `Wbar`, `Psi` and `y`.
#[derive(Debug, Clone)]
pub struct LinearModel {
    w: DenseMatrix,
    wbar: DenseMatrix,
    spec: Arc<CorrelationSpectrum>,
    y: Vec<f64>,
    gram: DenseMatrix,
    wty: Vec<f64>,
}

impl LinearModel {
    pub fn new(wbar: DenseMatrix, spec: Arc<CorrelationSpectrum>, y: Vec<f64>) -> Result<Self> {
        let w = spec.apply_sqrt(&wbar)?;
        Self::with_design(w, wbar, spec, y)
    }

    /// Builds a model whose composed design `W = Psi^{1/2} Wbar` is already known.
    pub fn with_design(
        w: DenseMatrix,
        wbar: DenseMatrix,
        spec: Arc<CorrelationSpectrum>,
        y: Vec<f64>,
    ) -> Result<Self> {
        let (m, k) = (wbar.rows(), wbar.cols());
        if m == 0 || k == 0 {
            return Err(Error::Dimension("empty design matrix".into()));
        }
        if w.rows() != m || w.cols() != k {
            return Err(Error::Dimension(format!(
                "composed design is {}x{} but Wbar is {m}x{k}",
                w.rows(),
                w.cols()
            )));
        }
        if spec.dim() != m {
            return Err(Error::Dimension(format!(
                "correlation matrix is {d}x{d} but Wbar has {m} rows",
                d = spec.dim()
            )));
        }
        if y.len() != m {
            return Err(Error::Dimension(format!(
                "observation has {} entries but Wbar has {m} rows",
                y.len()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "observation has non-finite entries".into(),
            ));
        }
        let ratio = k as f64 / m as f64;
        if !(MIN_ASPECT..=MAX_ASPECT).contains(&ratio) {
            return Err(Error::InvalidInput(format!(
                "aspect ratio K/M = {ratio} outside [{MIN_ASPECT}, {MAX_ASPECT}]"
            )));
        }
        let gram = w.gram();
        let wty = w.t_matvec(&y)?;
        Ok(Self {
            w,
            wbar,
            spec,
            y,
            gram,
            wty,
        })
    }

    /// Number of observations `M`.
    pub fn m(&self) -> usize {
        self.w.rows()
    }

    /// Number of unknowns `K`.
    pub fn k(&self) -> usize {
        self.w.cols()
    }

    pub fn design(&self) -> &DenseMatrix {
        &self.w
    }

    pub fn wbar(&self) -> &DenseMatrix {
        &self.wbar
    }

    pub fn spectrum(&self) -> &CorrelationSpectrum {
        &self.spec
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Unnormalized ridge objective `||y - W x||^2 + lambda ||x||^2`.
    pub fn ridge_objective(&self, x: &[f64], lambda: f64) -> Result<f64> {
        let r = self.residual(x)?;
        Ok(norm2_sq(&r) + lambda * norm2_sq(x))
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let wx = self.w.matvec(x)?;
        Ok(self.y.iter().zip(&wx).map(|(a, b)| a - b).collect())
    }
}

/// Ridge minimizer and its normalized cost `Phi(lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeSolution {
    pub lambda: f64,
    pub x_hat: Vec<f64>,
    /// `(||y - W x_hat||^2 + lambda ||x_hat||^2) / K`.
    pub phi: f64,
}

pub fn ridge_solve(model: &LinearModel, lambda: f64) -> Result<RidgeSolution> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidInput(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    let mut a = model.gram.clone();
    for i in 0..model.k() {
        a[(i, i)] += lambda;
    }
    let x_hat = Cholesky::factor(&a)?.solve(&model.wty)?;
    let phi = model.ridge_objective(&x_hat, lambda)? / model.k() as f64;
    Ok(RidgeSolution { lambda, x_hat, phi })
}

/// Stacked equations `Xi sigma + eps = phi` over a grid of `lambda`.
#[derive(Debug, Clone)]
pub struct RegressionSystem {
    pub lambdas: Vec<f64>,
    /// Rows `(xi1(lambda_i), xi2(lambda_i))`.
    pub xi: DenseMatrix,
    pub phi: Vec<f64>,
    pub coefficients: Vec<DeterministicEquivalents>,
}

impl RegressionSystem {
    /// `phi - Xi sigma`.
    pub fn residual(&self, sigma: [f64; 2]) -> Vec<f64> {
        (0..self.phi.len())
            .map(|i| self.phi[i] - self.xi[(i, 0)] * sigma[0] - self.xi[(i, 1)] * sigma[1])
            .collect()
    }
}

/// Checks a regularization grid: at least two values, all positive, finite and distinct.
pub fn validate_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least two regularization values, got {}",
            lambdas.len()
        )));
    }
    if let Some(bad) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "regularization values must be positive and finite, found {bad}"
        )));
    }
    for (i, a) in lambdas.iter().enumerate() {
        if lambdas[..i].contains(a) {
            return Err(Error::InvalidInput(format!(
                "duplicate regularization value {a}"
            )));
        }
    }
    Ok(())
}

pub fn assemble_system(model: &LinearModel, lambdas: &[f64]) -> Result<RegressionSystem> {
    validate_lambdas(lambdas)?;
    let n = lambdas.len();
    let mut xi = DenseMatrix::zeros(n, 2);
    let mut phi = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    for (i, &lambda) in lambdas.iter().enumerate() {
        let c = coefficients(model.spectrum(), model.k(), lambda)?;
        xi[(i, 0)] = c.xi1;
        xi[(i, 1)] = c.xi2;
        phi.push(ridge_solve(model, lambda)?.phi);
        coeffs.push(c);
    }
    Ok(RegressionSystem {
        lambdas: lambdas.to_vec(),
        xi,
        phi,
        coefficients: coeffs,
    })
}

/// Ratio `sigma_x^2 / sigma_n^2`, with the degenerate cases kept explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Finite(f64),
    /// Zero noise variance with positive signal variance.
    Infinite,
    /// Both variances zero.
    Undefined,
}

impl Snr {
    pub fn from_variances(sigma_x2: f64, sigma_n2: f64) -> Self {
        if sigma_n2 > 0.0 {
            Snr::Finite(sigma_x2 / sigma_n2)
        } else if sigma_x2 > 0.0 {
            Snr::Infinite
        } else {
            Snr::Undefined
        }
    }

    pub fn linear(&self) -> Option<f64> {
        match *self {
            Snr::Finite(v) => Some(v),
            Snr::Infinite => Some(f64::INFINITY),
            Snr::Undefined => None,
        }
    }

    pub fn db(&self) -> Option<f64> {
        self.linear().map(|v| 10.0 * v.log10())
    }

    /// True when no finite ratio exists.
    pub fn is_degenerate(&self) -> bool {
        !matches!(self, Snr::Finite(_))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    /// `||phi - Xi sigma||` for the proposed method, `||y - W x_LS||` for ML.
    pub fit_residual_norm: f64,
    pub residual: Vec<f64>,
    pub fixed_point_iters: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrEstimate {
    pub sigma_x2: f64,
    pub sigma_n2: f64,
    pub snr: Snr,
    pub diagnostics: Diagnostics,
}

impl SnrEstimate {
    pub fn snr_linear(&self) -> Option<f64> {
        self.snr.linear()
    }

    pub fn snr_db(&self) -> Option<f64> {
        self.snr.db()
    }
}

/// Estimates `(sigma_x^2, sigma_n^2)` and their ratio from one observation.
pub fn estimate_snr(model: &LinearModel, lambdas: &[f64]) -> Result<SnrEstimate> {
    let system = assemble_system(model, lambdas)?;
    Ok(fit_system(&system))
}

/// Nonnegative least-squares fit of an assembled system.
pub fn fit_system(system: &RegressionSystem) -> SnrEstimate {
    let fit = nnls_2var(&system.xi, &system.phi)
        .expect("regression system is n x 2 with n >= 2 by construction");
    let [sigma_x2, sigma_n2] = fit.sigma;
    SnrEstimate {
        sigma_x2,
        sigma_n2,
        snr: Snr::from_variances(sigma_x2, sigma_n2),
        diagnostics: Diagnostics {
            fit_residual_norm: fit.residual_norm,
            residual: system.residual(fit.sigma),
            fixed_point_iters: system
                .coefficients
                .iter()
                .map(|c| c.fixed_point_iters)
                .collect(),
        },
    }
}

/// Divisor applied to the least-squares residual energy in [`ml_baseline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MlNormalization {
    /// `||y - W x_LS||^2 / M`, the Gaussian maximum-likelihood estimate.
    #[default]
    SampleCount,
    /// `||y - W x_LS||^2 / (M - K)` when `M > K`, otherwise `/ M`.
    DegreesOfFreedom,
}

/// Noise variance from the least-squares residual combined with a known
/// signal variance.
pub fn ml_baseline(model: &LinearModel, true_sigma_x2: f64) -> Result<SnrEstimate> {
    ml_baseline_with(model, true_sigma_x2, MlNormalization::default())
}

pub fn ml_baseline_with(
    model: &LinearModel,
    true_sigma_x2: f64,
    normalization: MlNormalization,
) -> Result<SnrEstimate> {
    if !(true_sigma_x2.is_finite() && true_sigma_x2 >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "signal variance must be finite and nonnegative, got {true_sigma_x2}"
        )));
    }
    let (m, k) = (model.m(), model.k());
    let residual = if m > k {
        let x_ls = ridge_solve(model, ML_LAMBDA)?.x_hat;
        model.residual(&x_ls)?
    } else {
        // Minimum-norm fit through the M x M system: r = lambda (W W^T + lambda I)^{-1} y.
        let mut g = model.w.transpose().gram();
        for i in 0..m {
            g[(i, i)] += ML_LAMBDA;
        }
        let r: Vec<f64> = Cholesky::factor(&g)?
            .solve(&model.y)?
            .into_iter()
            .map(|v| ML_LAMBDA * v)
            .collect();
        // A full-row-rank W interpolates y; what is left is regularization
        // leakage, so report the exact zero residual (a degenerate estimate).
        if norm2_sq(&r).sqrt() <= ML_INTERPOLATION_TOL * norm2_sq(&model.y).sqrt() {
            vec![0.0; m]
        } else {
            r
        }
    };
    let rss = norm2_sq(&residual);
    let divisor = match normalization {
        MlNormalization::DegreesOfFreedom if m > k => (m - k) as f64,
        _ => m as f64,
    };
    let sigma_n2 = rss / divisor;
    Ok(SnrEstimate {
        sigma_x2: true_sigma_x2,
        sigma_n2,
        snr: Snr::from_variances(true_sigma_x2, sigma_n2),
        diagnostics: Diagnostics {
            fit_residual_norm: rss.sqrt(),
            residual,
            fixed_point_iters: Vec::new(),
        },
    })
}
