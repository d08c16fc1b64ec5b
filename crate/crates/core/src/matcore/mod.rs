//! Dense complex linear algebra for small Hamiltonians: Hermitian
//! eigendecomposition, unitary exponentials, spectral norms and the
//! commutator (`ad`) calculus.

mod ad;
mod eigen;
mod hermitian;
mod matrix;

pub use ad::{ad_exp_series, ad_power, commutator, conjugate};
pub use eigen::{
    herm_eig, herm_eig_with, spectral_norm, unitary_exp, EigenDecomposition, DEFAULT_MAX_SWEEPS,
};
pub use hermitian::{HermitianMatrix, UnitaryMatrix, HERMITIAN_TOL, UNITARY_TOL};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum MatError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("matrix of dimension {dim} cannot hold {len} entries")]
    NotSquare { dim: usize, len: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian: ‖H − H†‖₂ = {deviation:.3e}, worst at entry ({row}, {col})")]
    NotHermitian { deviation: f64, row: usize, col: usize },
    #[error("matrix is not unitary: ‖U†U − I‖₂ = {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("ad-series did not reach tolerance after {terms} terms (remainder {remainder:.3e})")]
    SeriesDiverged { terms: usize, remainder: f64 },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> HermitianMatrix {
    HermitianMatrix::symmetrized(
        ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
    )
}

pub fn pauli_y() -> HermitianMatrix {
    HermitianMatrix::symmetrized(
        ComplexMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap(),
    )
}

pub fn pauli_z() -> HermitianMatrix {
    HermitianMatrix::from_real_diagonal(&[1.0, -1.0])
}
