//! Dense numerical kernels used throughout the crate.

mod bessel;
mod cholesky;
mod eigen;
mod matrix;
mod nnls;

pub use bessel::bessel_j0;
pub use cholesky::{spd_solve, Cholesky};
pub use eigen::{sym_eig, EigenPair};
pub use matrix::{dot, norm2_sq, DenseMatrix};
pub use nnls::{nnls_2var, nnls_gradient, Nnls2};
