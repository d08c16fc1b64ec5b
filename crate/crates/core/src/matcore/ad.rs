//! Commutator calculus: `ad A(X) = [A, X]`, its iterates, and the two routes
//! to `e^{t ad A}(B)` (conjugation and the truncated ad-series).

use num_complex::Complex64;

use super::{spectral_norm, ComplexMatrix, MatError, UnitaryMatrix};

/// Hard cap on ad-series terms; with `|t|·2‖A‖ ≤ 50` the tail is long gone by then.
const MAX_SERIES_TERMS: usize = 400;

/// `[A, B] = AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, MatError> {
    a.check_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

/// `(ad A)^p (B)`.
pub fn ad_power(a: &ComplexMatrix, b: &ComplexMatrix, p: usize) -> Result<ComplexMatrix, MatError> {
    a.check_dim(b)?;
    let mut x = b.clone();
    for _ in 0..p {
        x = commutator(a, &x)?;
    }
    Ok(x)
}

/// `U B U†`.
pub fn conjugate(u: &UnitaryMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, MatError> {
    let ub = u.as_matrix().try_mul(b)?;
    ub.try_mul(&u.as_matrix().adjoint())
}

/// `Σ_p t^p (ad A)^p(B) / p!`, truncated once the remainder bound
/// `‖B‖ x^{P+1} e^x / (P+1)!` with `x = |t|·2‖A‖` drops below `tol`.
pub fn ad_exp_series(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    t: Complex64,
    tol: f64,
) -> Result<ComplexMatrix, MatError> {
    a.check_dim(b)?;
    let b_norm = spectral_norm(b);
    let x = t.norm() * 2.0 * spectral_norm(a);
    let mut sum = b.clone();
    if b_norm == 0.0 || x == 0.0 {
        return Ok(sum);
    }
    let ex = x.exp();
    // x^{P+1}/(P+1)! maintained incrementally
    let mut ratio = x;
    let mut term = b.clone();
    for p in 1..=MAX_SERIES_TERMS {
        if b_norm * ratio * ex < tol {
            return Ok(sum);
        }
        term = commutator(a, &term)?.scale(t / p as f64);
        sum += &term;
        ratio *= x / (p + 1) as f64;
    }
    Err(MatError::SeriesDiverged {
        terms: MAX_SERIES_TERMS,
        remainder: b_norm * ratio * ex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{pauli_x, pauli_y, pauli_z, unitary_exp};

    fn i2() -> Complex64 {
        Complex64::new(0.0, 2.0)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        spectral_norm(&(a - b)) <= tol
    }

    #[test]
    fn pauli_commutators() {
        let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
        let xy = commutator(x.as_matrix(), y.as_matrix()).unwrap();
        assert!(close(&xy, &z.as_matrix().scale(i2()), 0.0));
        let yz = commutator(y.as_matrix(), z.as_matrix()).unwrap();
        assert!(close(&yz, &x.as_matrix().scale(i2()), 0.0));
        let zz = commutator(z.as_matrix(), z.as_matrix()).unwrap();
        assert_eq!(zz, ComplexMatrix::zeros(2));
        assert!(commutator(z.as_matrix(), &ComplexMatrix::zeros(3)).is_err());
    }

    #[test]
    fn ad_powers() {
        let (y, z) = (pauli_y(), pauli_z());
        let once = ad_power(y.as_matrix(), z.as_matrix(), 1).unwrap();
        assert!(close(&once, &pauli_x().as_matrix().scale(i2()), 0.0));
        for p in 0..8 {
            let m = ad_power(y.as_matrix(), z.as_matrix(), p).unwrap();
            assert!((spectral_norm(&m) - 2f64.powi(p as i32)).abs() < 1e-12);
        }
        assert_eq!(ad_power(y.as_matrix(), z.as_matrix(), 0).unwrap(), *z.as_matrix());
        let d1 = ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let d2 = ComplexMatrix::from_real_diagonal(&[-1.0, 0.5, 4.0]);
        assert_eq!(ad_power(&d1, &d2, 3).unwrap(), ComplexMatrix::zeros(3));
    }

    #[test]
    fn conjugation_rotates_z_about_y() {
        let (theta_y, theta_z) = (std::f64::consts::FRAC_PI_2 * 0.7, 0.9);
        let u = unitary_exp(&pauli_y(), theta_y / 2.0).unwrap();
        let b = pauli_z().as_matrix().scale_real(theta_z / 2.0);
        let got = conjugate(&u, &b).unwrap();
        let expected = (&pauli_z().as_matrix().scale_real(theta_y.cos())
            + &pauli_x().as_matrix().scale_real(theta_y.sin()))
            .scale_real(theta_z / 2.0);
        assert!(close(&got, &expected, 1e-14));
        assert_eq!(conjugate(&UnitaryMatrix::identity(2), &b).unwrap(), b);
    }

    #[test]
    fn series_matches_conjugation() {
        let theta = std::f64::consts::FRAC_PI_2;
        let a = pauli_y().as_matrix().scale_real(theta / 2.0);
        let z = pauli_z();
        let series = ad_exp_series(&a, z.as_matrix(), Complex64::new(0.0, -1.0), 1e-12).unwrap();
        let u = unitary_exp(&pauli_y(), theta / 2.0).unwrap();
        let conj = conjugate(&u, z.as_matrix()).unwrap();
        assert!(close(&series, &conj, 1e-10));
    }

    #[test]
    fn series_trivial_cases() {
        let a = pauli_x();
        let b = pauli_z();
        let zero_t = ad_exp_series(a.as_matrix(), b.as_matrix(), Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert_eq!(zero_t, *b.as_matrix());
        let d1 = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let d2 = ComplexMatrix::from_real_diagonal(&[3.0, -1.0]);
        let s = ad_exp_series(&d1, &d2, Complex64::new(0.3, -2.0), 1e-12).unwrap();
        assert!(close(&s, &d2, 1e-15));
    }
}
