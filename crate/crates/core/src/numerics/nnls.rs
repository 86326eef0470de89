//! Nonnegative least squares in exactly two unknowns.
//!
//! The nonnegative quadrant has four faces (interior, the two half-axes and
//! the origin). The constrained minimizer is the unconstrained minimizer of
//! one of them, so solving each face and keeping the feasible candidate with
//! the smallest objective gives the exact optimum without iteration.

use super::matrix::{dot, DenseMatrix};
use crate::error::{Error, Result};

/// Result of [`nnls_2var`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nnls2 {
    pub sigma: [f64; 2],
    /// `||phi - Xi sigma||_2`.
    pub residual_norm: f64,
}

/// `1/2 ||phi - Xi sigma||^2` for an `n x 2` matrix given by its columns.
fn objective(c0: &[f64], c1: &[f64], phi: &[f64], sigma: [f64; 2]) -> f64 {
    0.5 * phi
        .iter()
        .zip(c0.iter().zip(c1))
        .map(|(p, (a, b))| {
            let r = p - a * sigma[0] - b * sigma[1];
            r * r
        })
        .sum::<f64>()
}

/// Minimizes `1/2 ||phi - Xi sigma||^2` subject to `sigma >= 0`.
pub fn nnls_2var(xi: &DenseMatrix, phi: &[f64]) -> Result<Nnls2> {
    if xi.cols() != 2 {
        return Err(Error::Dimension(format!(
            "expected an n x 2 system matrix, got {} columns",
            xi.cols()
        )));
    }
    if xi.rows() != phi.len() {
        return Err(Error::Dimension(format!(
            "system has {} rows but right-hand side has {} entries",
            xi.rows(),
            phi.len()
        )));
    }
    if xi.rows() < 2 {
        return Err(Error::Dimension("need at least two equations".into()));
    }

    let c0 = xi.column(0);
    let c1 = xi.column(1);
    let g00 = dot(&c0, &c0);
    let g01 = dot(&c0, &c1);
    let g11 = dot(&c1, &c1);
    let b0 = dot(&c0, phi);
    let b1 = dot(&c1, phi);

    let mut candidates: Vec<[f64; 2]> = Vec::with_capacity(4);
    // Both free. Skipped when the normal matrix is numerically singular.
    let det = g00 * g11 - g01 * g01;
    if det > 1e-14 * g00 * g11 && det > 0.0 {
        let s0 = (g11 * b0 - g01 * b1) / det;
        let s1 = (g00 * b1 - g01 * b0) / det;
        if s0 >= 0.0 && s1 >= 0.0 {
            candidates.push([s0, s1]);
        }
    }
    if g00 > 0.0 {
        let s0 = b0 / g00;
        if s0 >= 0.0 {
            candidates.push([s0, 0.0]);
        }
    }
    if g11 > 0.0 {
        let s1 = b1 / g11;
        if s1 >= 0.0 {
            candidates.push([0.0, s1]);
        }
    }
    candidates.push([0.0, 0.0]);

    let mut best = candidates[0];
    let mut best_obj = objective(&c0, &c1, phi, best);
    for &cand in &candidates[1..] {
        let obj = objective(&c0, &c1, phi, cand);
        if obj < best_obj {
            best = cand;
            best_obj = obj;
        }
    }
    Ok(Nnls2 {
        sigma: best,
        residual_norm: (2.0 * best_obj).sqrt(),
    })
}

/// Gradient `Xi^T (Xi sigma - phi)` of the NNLS objective.
pub fn nnls_gradient(xi: &DenseMatrix, phi: &[f64], sigma: [f64; 2]) -> Result<[f64; 2]> {
    let fitted = xi.matvec(&sigma)?;
    let r: Vec<f64> = fitted.iter().zip(phi).map(|(f, p)| f - p).collect();
    let g = xi.t_matvec(&r)?;
    Ok([g[0], g[1]])
}
