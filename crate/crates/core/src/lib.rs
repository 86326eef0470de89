//! Blind SNR estimation for linear models `y = Psi^{1/2} Wbar x0 + n` with a
//! known left-correlated Gaussian design.
//!
//! The ridge cost of a single observation, evaluated at several
//! regularization values, is matched against its random-matrix deterministic
//! equivalent, which is linear in the unknown signal and noise variances.
//! A two-unknown nonnegative least-squares fit then yields both variances.
//!
//! Modules:
//! - [`numerics`]: dense kernels (Jacobi eigendecomposition, Cholesky, `J0`, two-variable NNLS)
//! - [`rmt`]: fixed point `delta(t)`, `Tr(Psi T)`, coefficients `xi1`/`xi2`
//! - [`estimator`]: ridge solve, system assembly, SNR estimate, ML comparator
//! - [`scenarios`]: correlation models, samplers, experiment catalog
//! - [`harness`]: Monte-Carlo runs, metrics, file formats

pub mod error;
pub mod estimator;
pub mod harness;
pub mod numerics;
pub mod rmt;
pub mod scenarios;

pub use error::{Error, Result};
