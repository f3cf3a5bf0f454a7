//! Dense complex linear algebra: operator storage, Kronecker products and
//! Hermitian eigendecomposition.

mod eigen;
mod matrix;

pub use eigen::{
    eig_hermitian, eigvalsh, matrix_function, spectral_map, EigenDecomposition,
    HERMITICITY_TOLERANCE, OFF_DIAGONAL_TOLERANCE,
};
pub use matrix::{BasisLabel, OperatorMatrix};
