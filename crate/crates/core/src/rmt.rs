//! Deterministic equivalents of the normalized ridge cost.
//!
//! For `W = Psi^{1/2} Wbar` with `Wbar` standard Gaussian (`M x K`) and
//! `t = K / lambda`, the expected normalized ridge cost concentrates around
//!
//! ```text
//! alpha(t) = xi1 * sigma_x^2 + xi2 * sigma_n^2
//! xi1 = Tr(Psi T) / (1 + t delta)
//! xi2 = M/K - t Tr(Psi T) / (K (1 + t delta))
//! T   = U (I + t/(1 + t delta) Q)^{-1} U^T
//! ```
//!
//! where `delta` is the positive fixed point of
//! `delta = (1/K) sum_i q_i / (1 + t q_i / (1 + t delta))`.
//!
//! `T` is never formed: only `Tr(Psi T) = sum_i q_i / (1 + c q_i)` is needed,
//! evaluated in the eigenbasis of `Psi`.

use crate::error::{Error, Result};
use crate::numerics::{sym_eig, DenseMatrix};

/// Relative eigenvalue floor below which a correlation matrix is rejected.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-8;

/// Eigen-structure of a left correlation matrix `Psi = U diag(q) U^T`.
#[derive(Debug, Clone)]
pub struct CorrelationSpectrum {
    eigenvalues: Vec<f64>,
    /// `None` when `Psi` was supplied diagonal (`U = I`).
    basis: Option<DenseMatrix>,
    /// Cached dense `Psi^{1/2}` for the non-diagonal case.
    sqrt_psi: Option<DenseMatrix>,
    q_max: f64,
}

impl CorrelationSpectrum {
    /// Diagonal `Psi = diag(q)`.
    pub fn from_diagonal(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidInput("empty correlation spectrum".into()));
        }
        if let Some(bad) = q.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "diagonal correlation entries must be finite and nonnegative, found {bad}"
            )));
        }
        let q_max = q.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            eigenvalues: q,
            basis: None,
            sqrt_psi: None,
            q_max,
        })
    }

    /// Dense symmetric `Psi`. Eigenvalues in `[-1e-8 q_max, 0)` are floored
    /// to zero; anything more negative is an error.
    pub fn from_dense(psi: &DenseMatrix) -> Result<Self> {
        let eig = sym_eig(psi)?;
        let q_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let tolerance = NEGATIVE_EIGENVALUE_TOL * q_max;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tolerance {
            return Err(Error::Indefinite {
                min_eigenvalue: min,
                tolerance,
            });
        }
        let q: Vec<f64> = eig.eigenvalues.iter().map(|&v| v.max(0.0)).collect();
        Self::from_eigen(q, eig.eigenvectors)
    }

    /// From an eigenbasis `U` (orthonormal columns) and eigenvalues `q >= 0`.
    pub fn from_eigen(q: Vec<f64>, basis: DenseMatrix) -> Result<Self> {
        if !basis.is_square() || basis.rows() != q.len() {
            return Err(Error::Dimension(format!(
                "eigenbasis is {}x{} but there are {} eigenvalues",
                basis.rows(),
                basis.cols(),
                q.len()
            )));
        }
        if let Some(bad) = q.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "eigenvalues must be finite and nonnegative, found {bad}"
            )));
        }
        let m = q.len();
        let roots: Vec<f64> = q.iter().map(|v| v.sqrt()).collect();
        let sqrt_psi = DenseMatrix::from_fn(m, m, |i, j| {
            (0..m)
                .map(|k| basis[(i, k)] * roots[k] * basis[(j, k)])
                .sum()
        });
        let q_max = q.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            eigenvalues: q,
            basis: Some(basis),
            sqrt_psi: Some(sqrt_psi),
            q_max,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn is_diagonal(&self) -> bool {
        self.basis.is_none()
    }

    pub fn basis(&self) -> Option<&DenseMatrix> {
        self.basis.as_ref()
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    /// `Tr(Psi)`.
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Checks the normalized-trace condition `(1/K) Tr(Q) > 0`.
    pub fn validate_for(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidInput("K must be at least 1".into()));
        }
        if self.trace() / k as f64 <= 0.0 || self.trace().is_nan() {
            return Err(Error::InvalidInput(
                "correlation matrix has zero trace".into(),
            ));
        }
        Ok(())
    }

    /// Dense `Psi`.
    pub fn to_dense(&self) -> DenseMatrix {
        let m = self.dim();
        match &self.basis {
            None => DenseMatrix::from_diag(&self.eigenvalues),
            Some(u) => DenseMatrix::from_fn(m, m, |i, j| {
                (0..m)
                    .map(|k| u[(i, k)] * self.eigenvalues[k] * u[(j, k)])
                    .sum()
            }),
        }
    }

    /// `Psi^{1/2} A` for an `M x K` matrix `A`.
    pub fn apply_sqrt(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        if a.rows() != self.dim() {
            return Err(Error::Dimension(format!(
                "correlation is {m}x{m} but matrix has {} rows",
                a.rows(),
                m = self.dim()
            )));
        }
        match &self.sqrt_psi {
            None => {
                let roots: Vec<f64> = self.eigenvalues.iter().map(|v| v.sqrt()).collect();
                a.scale_rows(&roots)
            }
            Some(s) => s.matmul(a),
        }
    }
}

/// Iteration controls for the `delta` fixed point.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions {
    /// Relative step tolerance.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

/// The fixed-point map `F(delta)`.
pub fn fixed_point_map(spec: &CorrelationSpectrum, k: usize, t: f64, delta: f64) -> f64 {
    let c = t / (1.0 + t * delta);
    spec.eigenvalues
        .iter()
        .map(|&q| q / (1.0 + c * q))
        .sum::<f64>()
        / k as f64
}

/// Solves `delta = F(delta)` by Picard iteration from `delta_0 = Tr(Q)/K`.
///
/// Stops when `|delta_{j+1} - delta_j| <= tol * delta_j`; returns the last
/// iterate and the number of map evaluations.
pub fn solve_delta(
    spec: &CorrelationSpectrum,
    k: usize,
    t: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, usize)> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    spec.validate_for(k)?;
    let mut delta = spec.trace() / k as f64;
    for iter in 1..=max_iter {
        let next = fixed_point_map(spec, k, t, delta);
        if (next - delta).abs() <= tol * delta {
            return Ok((next, iter));
        }
        delta = next;
    }
    Err(Error::Convergence {
        what: "delta fixed point",
        iterations: max_iter,
        last: delta,
    })
}

/// `Tr(Psi T(t)) = sum_i q_i / (1 + c q_i)` with `c = t / (1 + t delta)`.
pub fn trace_psi_t(spec: &CorrelationSpectrum, t: f64, delta: f64) -> f64 {
    let c = t / (1.0 + t * delta);
    spec.eigenvalues.iter().map(|&q| q / (1.0 + c * q)).sum()
}

/// Deterministic quantities for one regularization value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterministicEquivalents {
    pub lambda: f64,
    pub t: f64,
    pub delta: f64,
    pub trace_psi_t: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub fixed_point_iters: usize,
}

impl DeterministicEquivalents {
    /// Predicted normalized cost `xi1 sigma_x^2 + xi2 sigma_n^2`.
    pub fn alpha(&self, sigma_x2: f64, sigma_n2: f64) -> f64 {
        alpha(self, sigma_x2, sigma_n2)
    }
}

pub fn alpha(coeffs: &DeterministicEquivalents, sigma_x2: f64, sigma_n2: f64) -> f64 {
    coeffs.xi1 * sigma_x2 + coeffs.xi2 * sigma_n2
}

/// Coefficients `xi1(lambda)`, `xi2(lambda)` for a model with `K` unknowns.
pub fn coefficients(
    spec: &CorrelationSpectrum,
    k: usize,
    lambda: f64,
) -> Result<DeterministicEquivalents> {
    coefficients_with(spec, k, lambda, FixedPointOptions::default())
}

pub fn coefficients_with(
    spec: &CorrelationSpectrum,
    k: usize,
    lambda: f64,
    opts: FixedPointOptions,
) -> Result<DeterministicEquivalents> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidInput(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    let kf = k as f64;
    let m = spec.dim() as f64;
    let t = kf / lambda;
    let (delta, iters) = solve_delta(spec, k, t, opts.tol, opts.max_iter)?;
    let tr = trace_psi_t(spec, t, delta);
    let denom = 1.0 + t * delta;
    Ok(DeterministicEquivalents {
        lambda,
        t,
        delta,
        trace_psi_t: tr,
        xi1: tr / denom,
        xi2: m / kf - t * tr / (kf * denom),
        fixed_point_iters: iters,
    })
}
