#![allow(dead_code)]

use std::f64::consts::PI;

use cohbound_core::matcore::{spectral_norm, unitary_exp};
use cohbound_core::{Circuit, Complex64, ComplexMatrix, Gate, HermitianMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gaussian-free random Hermitian matrix with entries in the unit box.
pub fn random_hermitian_raw(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::new(m).unwrap()
}

/// Random Hermitian matrix rescaled to spectral norm `norm`.
pub fn random_hermitian(rng: &mut impl Rng, n: usize, norm: f64) -> HermitianMatrix {
    let h = random_hermitian_raw(rng, n);
    let s = h.spectral_norm();
    h.scale(norm / s)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(n, data).unwrap()
}

/// `N` gates of dimension `n`, each with norm drawn from `(0, max_norm]`.
pub fn random_circuit(rng: &mut impl Rng, n: usize, n_gates: usize, max_norm: f64) -> Circuit {
    let hs = (0..n_gates)
        .map(|_| {
            let norm = rng.random_range(0.05..=max_norm);
            random_hermitian(rng, n, norm)
        })
        .collect();
    Circuit::from_hamiltonians(hs).unwrap()
}

/// Draw `(n, N)` from the corpus ranges and build a circuit.
pub fn corpus_circuit(rng: &mut impl Rng, max_norm: f64) -> Circuit {
    let n = if rng.random_bool(0.5) { 2 } else { 4 };
    let n_gates = rng.random_range(1..=4);
    random_circuit(rng, n, n_gates, max_norm)
}

/// Gates diagonal in one shared random basis.
pub fn commuting_circuit(rng: &mut impl Rng, n: usize, n_gates: usize, max_norm: f64) -> Circuit {
    let basis = unitary_exp(&random_hermitian(rng, n, 2.0), 1.0).unwrap();
    let v = basis.as_matrix();
    let hs = (0..n_gates)
        .map(|_| {
            let diag: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let d = ComplexMatrix::from_real_diagonal(&diag);
            let m = &(v * &d) * &v.adjoint();
            let h = HermitianMatrix::new(m).unwrap();
            let norm = rng.random_range(0.05..=max_norm);
            let s = h.spectral_norm();
            h.scale(norm / s)
        })
        .collect();
    Circuit::from_hamiltonians(hs).unwrap()
}

pub fn example1() -> Circuit {
    Circuit::new(vec![Gate::rz(PI / 4.0), Gate::ry(PI / 2.0)]).unwrap()
}

pub fn example1_h0() -> f64 {
    PI * 5f64.sqrt() / 8.0
}

/// Entries exactly as printed.
pub fn example2() -> Circuit {
    example2_with_offdiag(3.29597)
}

pub fn example2_with_offdiag(im: f64) -> Circuit {
    let h1 = ComplexMatrix::from_real_rows(&[&[5.0, 0.2], &[0.2, -0.5]]).unwrap();
    let h2 = ComplexMatrix::from_rows(&[
        vec![c(-0.48186, 0.0), c(0.08813, -im)],
        vec![c(0.08813, im), c(4.99186, 0.0)],
    ])
    .unwrap();
    Circuit::from_hamiltonians(vec![HermitianMatrix::new(h1).unwrap(), HermitianMatrix::new(h2).unwrap()]).unwrap()
}

/// `max_{x∈[−1,1]} max(‖A + xB‖₂, ‖xA + B‖₂)` by a 1e-4 grid and golden-section
/// refinement around the best grid point.
pub fn dense_scan(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let f_ab = |x: f64| spectral_norm(&(a + &b.scale_real(x)));
    let f_ba = |x: f64| spectral_norm(&(&a.scale_real(x) + b));
    scan_1d(f_ab).max(scan_1d(f_ba))
}

fn scan_1d(f: impl Fn(f64) -> f64) -> f64 {
    let h: f64 = 1e-4;
    let mut best = (f(-1.0), -1.0);
    let steps = (2.0_f64 / h).round() as usize;
    for i in 0..=steps {
        let x = (-1.0 + i as f64 * h).min(1.0);
        let v = f(x);
        if v > best.0 {
            best = (v, x);
        }
    }
    let (mut lo, mut hi) = ((best.1 - h).max(-1.0), (best.1 + h).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) > f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    best.0.max(f(0.5 * (lo + hi)))
}

/// Trace profile for a pair of 2×2 generators.
#[derive(Clone, Copy, Debug)]
pub enum PairFamily {
    Traceless,
    EqualTrace,
    General,
}

fn with_trace(h: &HermitianMatrix, trace: f64) -> HermitianMatrix {
    let m = h.as_matrix();
    let shift = 0.5 * (trace - (m[(0, 0)].re + m[(1, 1)].re));
    let mut out = m.clone();
    out[(0, 0)] += shift;
    out[(1, 1)] += shift;
    HermitianMatrix::new(out).unwrap()
}

/// Two-gate 2×2 circuit; conjugation keeps the traces, so the pencil
/// `A_1 + xA_2` inherits the family.
pub fn pair_circuit(rng: &mut impl Rng, family: PairFamily) -> Circuit {
    let h1 = random_hermitian_raw(rng, 2).scale(rng.random_range(0.3..3.0));
    let h2 = random_hermitian_raw(rng, 2).scale(rng.random_range(0.3..3.0));
    let (h1, h2) = match family {
        PairFamily::Traceless => (with_trace(&h1, 0.0), with_trace(&h2, 0.0)),
        PairFamily::EqualTrace => {
            let t = rng.random_range(-3.0..3.0);
            (with_trace(&h1, t), with_trace(&h2, t))
        }
        PairFamily::General => (h1, h2),
    };
    Circuit::from_hamiltonians(vec![h1, h2]).unwrap()
}
