use num_complex::Complex64;

use super::eigen::{jacobi, spectral_norm, DEFAULT_MAX_SWEEPS};
use super::{ComplexMatrix, MatError};

/// Relative tolerance on `‖H − H†‖₂` accepted when constructing a Hermitian matrix.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Absolute tolerance on `‖U†U − I‖₂`.
pub const UNITARY_TOL: f64 = 1e-10;

/// A self-adjoint matrix. The stored value is symmetrized, so `inner† = inner`
/// up to floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, MatError> {
        let asym = spectral_norm(&(&m - &m.adjoint()));
        let scale = spectral_norm(&m).max(1.0);
        if asym > HERMITIAN_TOL * scale {
            let (row, col) = worst_asymmetric_entry(&m);
            return Err(MatError::NotHermitian {
                deviation: asym,
                row,
                col,
            });
        }
        Ok(Self::symmetrized(m))
    }

    /// `(m + m†)/2` without the tolerance check. Only for values that are
    /// Hermitian by construction (conjugations, Gram matrices, sums).
    pub(crate) fn symmetrized(m: ComplexMatrix) -> Self {
        let n = m.dim();
        let mut out = m;
        for i in 0..n {
            out[(i, i)].im = 0.0;
            for j in i + 1..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self { inner: out }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::zeros(dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self {
            inner: ComplexMatrix::from_real_diagonal(diag),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.scale_real(s),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, MatError> {
        Ok(Self {
            inner: self.inner.try_add(&rhs.inner)?,
        })
    }

    /// `max |λ|`, which equals the largest singular value for Hermitian input.
    pub fn spectral_norm(&self) -> f64 {
        match jacobi(&self.inner, DEFAULT_MAX_SWEEPS) {
            Ok((values, _)) => values[0].abs().max(values[values.len() - 1].abs()),
            Err(_) => self.inner.frobenius_norm(),
        }
    }
}

impl AsRef<ComplexMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.inner
    }
}

fn worst_asymmetric_entry(m: &ComplexMatrix) -> (usize, usize) {
    let n = m.dim();
    let mut best = (0, 0);
    let mut worst = -1.0;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
                best = (i, j);
            }
        }
    }
    best
}

/// A unitary matrix, `U†U = I` within [`UNITARY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    inner: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, MatError> {
        let defect = spectral_norm(&(&(m.adjoint() * &m) - &ComplexMatrix::identity(m.dim())));
        if defect > UNITARY_TOL {
            return Err(MatError::NotUnitary { deviation: defect });
        }
        Ok(Self { inner: m })
    }

    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self { inner: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(dim),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    /// Product of two unitaries stays unitary.
    pub fn compose(&self, rhs: &Self) -> Result<Self, MatError> {
        Ok(Self {
            inner: self.inner.try_mul(&rhs.inner)?,
        })
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>, MatError> {
        self.inner.apply(v)
    }
}

impl AsRef<ComplexMatrix> for UnitaryMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.inner
    }
}
