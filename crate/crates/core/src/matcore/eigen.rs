//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! spectral quantities derived from it.

use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix, MatError, UnitaryMatrix};

/// Sweep cap used when the caller does not pick one.
pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass, relative to the full Frobenius norm, at
/// which the iteration stops.
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues (descending) with orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(λ)) V†` for a scalar function of the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = self.vectors.as_matrix();
        let n = self.dim();
        let fl: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v[(i, k)] * fl[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }

    /// `e^{-iθH}` assembled from the spectrum.
    pub fn exp_minus_i(&self, theta: f64) -> UnitaryMatrix {
        UnitaryMatrix::from_trusted(self.map_spectrum(|l| Complex64::from_polar(1.0, -theta * l)))
    }

    /// `e^{-iθH} v` without forming the exponential.
    pub fn apply_exp_minus_i(&self, theta: f64, v: &[Complex64]) -> Vec<Complex64> {
        let u = self.vectors.as_matrix();
        let n = self.dim();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += u[(i, k)].conj() * v[i];
            }
            *c = acc * Complex64::from_polar(1.0, -theta * self.values[k]);
        }
        (0..n)
            .map(|i| (0..n).map(|k| u[(i, k)] * coeffs[k]).sum())
            .collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }
}

/// Eigendecomposition of a Hermitian matrix with the default sweep cap.
pub fn herm_eig(h: &HermitianMatrix) -> Result<EigenDecomposition, MatError> {
    herm_eig_with(h, DEFAULT_MAX_SWEEPS)
}

pub fn herm_eig_with(h: &HermitianMatrix, max_sweeps: usize) -> Result<EigenDecomposition, MatError> {
    let (values, vectors) = jacobi(h.as_matrix(), max_sweeps)?;
    Ok(EigenDecomposition {
        values,
        vectors: UnitaryMatrix::from_trusted(vectors),
    })
}

/// Largest singular value, `λ_max(A†A)^{1/2}`.
///
/// Falls back to the Frobenius norm (an upper bound) in the practically
/// unreachable case that the eigensolver does not converge.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    let gram = a.adjoint() * a;
    let gram = HermitianMatrix::symmetrized(gram);
    match jacobi(gram.as_matrix(), DEFAULT_MAX_SWEEPS) {
        Ok((values, _)) => values[0].max(0.0).sqrt(),
        Err(_) => a.frobenius_norm(),
    }
}

/// `e^{-iθH}` computed from the eigendecomposition of `h`.
pub fn unitary_exp(h: &HermitianMatrix, theta: f64) -> Result<UnitaryMatrix, MatError> {
    Ok(herm_eig(h)?.exp_minus_i(theta))
}

/// Cyclic Jacobi on a matrix assumed Hermitian. Returns eigenvalues sorted
/// descending and the matching eigenvector columns.
pub(crate) fn jacobi(m: &ComplexMatrix, max_sweeps: usize) -> Result<(Vec<f64>, ComplexMatrix), MatError> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut converged = scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        if sweep == max_sweeps {
            break;
        }
        sweep += 1;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(MatError::NoConvergence {
            sweeps: max_sweeps,
            off_diagonal: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// The phase of `a[p][q]` is moved onto row/column `q` so the 2x2 block
/// becomes real symmetric, then the classical real rotation is applied.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase_conj = (apq / r).conj();

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}
