//! Benchmark fixtures.
//!
//! Deterministic trigonometric entries stand in for random draws so runs
//! compare across machines without a seeded RNG.

use std::f64::consts::PI;

use cohbound_core::{Circuit, Complex64, ComplexMatrix, Gate, HermitianMatrix};

pub fn example1() -> Circuit {
    Circuit::new(vec![Gate::rz(PI / 4.0), Gate::ry(PI / 2.0)]).expect("valid gates")
}

/// Hermitian `n × n` matrix with spectral norm `norm`, seeded by `k`.
pub fn hermitian(n: usize, k: usize, norm: f64) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = Complex64::new((1.7 * (i + 1) as f64 * (k + 1) as f64).sin(), 0.0);
        for j in i + 1..n {
            let t = 0.9 * ((i + 2) * (j + 3) * (k + 1)) as f64;
            let z = Complex64::new(t.sin(), (1.3 * t).cos());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let h = HermitianMatrix::new(m).expect("constructed hermitian");
    let s = h.spectral_norm();
    h.scale(norm / s)
}

pub fn circuit(n: usize, n_gates: usize, norm: f64) -> Circuit {
    Circuit::from_hamiltonians((0..n_gates).map(|k| hermitian(n, k, norm)).collect()).expect("matching dimensions")
}
