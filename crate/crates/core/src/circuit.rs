//! Circuit data model: ideal and perturbed evolution, fidelity, and the
//! effective generators of the perturbed flows.
//!
//! Ordering convention: a circuit `[H_1, …, H_N]` produces
//! `e^{-iH_1} ⋯ e^{-iH_N} |ψ₀⟩`, so the **last** gate in the list acts on the
//! state first.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matcore::{
    herm_eig, pauli_x, pauli_y, pauli_z, ComplexMatrix, EigenDecomposition, HermitianMatrix, MatError,
    UnitaryMatrix,
};

/// Tolerance on `|‖ψ‖ − 1|` for state vectors.
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CircuitError {
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error("a circuit needs at least one gate")]
    Empty,
    #[error("gate {index} ({label}) has dimension {found}, expected {expected}")]
    GateDimension {
        index: usize,
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("state has dimension {found}, circuit acts on {expected}")]
    StateDimension { expected: usize, found: usize },
    #[error("state is not normalized (‖ψ‖ = {norm})")]
    NotNormalized { norm: f64 },
    #[error("expected {expected} per-gate perturbations, got {found}")]
    PerturbationLength { expected: usize, found: usize },
    #[error("perturbation {value} exceeds ε̄ = {eps_bar}")]
    PerturbationOutOfRange { value: f64, eps_bar: f64 },
    #[error("ε̄ must be finite and nonnegative, got {0}")]
    InvalidEpsBar(f64),
}

/// A labelled gate `U = e^{-iH}`.
#[derive(Clone, Debug)]
pub struct Gate {
    pub label: String,
    pub hamiltonian: HermitianMatrix,
}

impl Gate {
    pub fn new(label: impl Into<String>, hamiltonian: HermitianMatrix) -> Self {
        Self {
            label: label.into(),
            hamiltonian,
        }
    }

    /// `R_x(θ) = e^{-i(θ/2)X}`
    pub fn rx(theta: f64) -> Self {
        Self::new(format!("rx({theta})"), pauli_x().scale(theta / 2.0))
    }

    /// `R_y(θ) = e^{-i(θ/2)Y}`
    pub fn ry(theta: f64) -> Self {
        Self::new(format!("ry({theta})"), pauli_y().scale(theta / 2.0))
    }

    /// `R_z(θ) = e^{-i(θ/2)Z}`
    pub fn rz(theta: f64) -> Self {
        Self::new(format!("rz({theta})"), pauli_z().scale(theta / 2.0))
    }
}

#[derive(Clone, Debug)]
pub struct Circuit {
    gates: Vec<Gate>,
    dim: usize,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let dim = gates.first().ok_or(CircuitError::Empty)?.hamiltonian.dim();
        for (index, g) in gates.iter().enumerate() {
            if g.hamiltonian.dim() != dim {
                return Err(CircuitError::GateDimension {
                    index,
                    label: g.label.clone(),
                    expected: dim,
                    found: g.hamiltonian.dim(),
                });
            }
        }
        Ok(Self { gates, dim })
    }

    pub fn from_hamiltonians(hs: Vec<HermitianMatrix>) -> Result<Self, CircuitError> {
        Self::new(
            hs.into_iter()
                .enumerate()
                .map(|(i, h)| Gate::new(format!("H{}", i + 1), h))
                .collect(),
        )
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn hamiltonians(&self) -> impl Iterator<Item = &HermitianMatrix> {
        self.gates.iter().map(|g| &g.hamiltonian)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `‖H_k‖₂` for every gate, in order.
    pub fn gate_norms(&self) -> Vec<f64> {
        self.hamiltonians().map(HermitianMatrix::spectral_norm).collect()
    }

    /// Diagonalize every generator once so repeated evolutions are cheap.
    pub fn prepare(&self) -> Result<PreparedCircuit, CircuitError> {
        let spectra = self
            .hamiltonians()
            .map(herm_eig)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PreparedCircuit {
            spectra,
            dim: self.dim,
        })
    }
}

/// A circuit with each generator diagonalized.
#[derive(Clone, Debug)]
pub struct PreparedCircuit {
    spectra: Vec<EigenDecomposition>,
    dim: usize,
}

impl PreparedCircuit {
    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spectrum(&self, k: usize) -> &EigenDecomposition {
        &self.spectra[k]
    }

    /// `e^{-i m H_k}` for gate index `k` (0-based).
    pub fn gate_unitary(&self, k: usize, multiplier: f64) -> UnitaryMatrix {
        self.spectra[k].exp_minus_i(multiplier)
    }

    /// `e^{-i m_1 H_1} ⋯ e^{-i m_N H_N} ψ`, applied right to left.
    pub fn evolve(&self, psi: &[Complex64], multipliers: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(multipliers.len(), self.spectra.len());
        let mut v = psi.to_vec();
        for (spec, &m) in self.spectra.iter().zip(multipliers).rev() {
            v = spec.apply_exp_minus_i(m, &v);
        }
        v
    }

    /// `Σ_k w_k W_k H_k W_k†` with `W_k = e^{-i m_1 H_1} ⋯ e^{-i m_{k-1} H_{k-1}}`.
    pub fn conjugated_sum(&self, hamiltonians: &[&HermitianMatrix], multipliers: &[f64], weights: &[f64]) -> HermitianMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for (k, term) in self.conjugated_terms(hamiltonians, multipliers).iter().enumerate() {
            if weights[k] != 0.0 {
                acc += &term.scale_real(weights[k]);
            }
        }
        HermitianMatrix::symmetrized(acc)
    }

    /// `W_k H_k W_k†` for every `k`.
    pub fn conjugated_terms(&self, hamiltonians: &[&HermitianMatrix], multipliers: &[f64]) -> Vec<ComplexMatrix> {
        let mut w = ComplexMatrix::identity(self.dim);
        let mut out = Vec::with_capacity(hamiltonians.len());
        for (k, h) in hamiltonians.iter().enumerate() {
            out.push(&(&w * h.as_matrix()) * &w.adjoint());
            if k + 1 < hamiltonians.len() {
                w = &w * self.gate_unitary(k, multipliers[k]).as_matrix();
            }
        }
        out
    }
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, CircuitError> {
        let norm = l2(&amplitudes);
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(CircuitError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescale an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self, CircuitError> {
        let norm = l2(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(CircuitError::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// `|i⟩` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub(crate) fn from_trusted(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amplitudes)
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let diff: Vec<Complex64> = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a - b)
            .collect();
        l2(&diff)
    }
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationMode {
    /// One relative error shared by every gate.
    Uniform,
    /// An independent relative error per gate.
    PerGate,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    Uniform(f64),
    PerGate(Vec<f64>),
}

/// Relative rotation errors `U_k(ε) = e^{-i(1+ε_k)H_k}` with `|ε_k| ≤ ε̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationSpec {
    eps_bar: f64,
    values: Perturbation,
}

impl PerturbationSpec {
    pub fn uniform(eps_bar: f64, eps: f64) -> Result<Self, CircuitError> {
        check_eps_bar(eps_bar)?;
        check_in_range(eps, eps_bar)?;
        Ok(Self {
            eps_bar,
            values: Perturbation::Uniform(eps),
        })
    }

    pub fn per_gate(eps_bar: f64, eps: Vec<f64>) -> Result<Self, CircuitError> {
        check_eps_bar(eps_bar)?;
        for &e in &eps {
            check_in_range(e, eps_bar)?;
        }
        Ok(Self {
            eps_bar,
            values: Perturbation::PerGate(eps),
        })
    }

    pub fn eps_bar(&self) -> f64 {
        self.eps_bar
    }

    pub fn values(&self) -> &Perturbation {
        &self.values
    }

    pub fn mode(&self) -> PerturbationMode {
        match self.values {
            Perturbation::Uniform(_) => PerturbationMode::Uniform,
            Perturbation::PerGate(_) => PerturbationMode::PerGate,
        }
    }

    /// Per-gate relative errors `ε_k` for an `n_gates` circuit.
    pub fn per_gate_values(&self, n_gates: usize) -> Result<Vec<f64>, CircuitError> {
        match &self.values {
            Perturbation::Uniform(e) => Ok(vec![*e; n_gates]),
            Perturbation::PerGate(v) if v.len() == n_gates => Ok(v.clone()),
            Perturbation::PerGate(v) => Err(CircuitError::PerturbationLength {
                expected: n_gates,
                found: v.len(),
            }),
        }
    }
}

fn check_eps_bar(eps_bar: f64) -> Result<(), CircuitError> {
    if eps_bar.is_finite() && eps_bar >= 0.0 {
        Ok(())
    } else {
        Err(CircuitError::InvalidEpsBar(eps_bar))
    }
}

fn check_in_range(value: f64, eps_bar: f64) -> Result<(), CircuitError> {
    if value.is_finite() && value.abs() <= eps_bar {
        Ok(())
    } else {
        Err(CircuitError::PerturbationOutOfRange { value, eps_bar })
    }
}

fn check_state(c: &Circuit, psi: &StateVector) -> Result<(), CircuitError> {
    if psi.dim() != c.dim() {
        return Err(CircuitError::StateDimension {
            expected: c.dim(),
            found: psi.dim(),
        });
    }
    Ok(())
}

/// `|ψ̂⟩ = e^{-iH_1} ⋯ e^{-iH_N} |ψ₀⟩`
pub fn ideal_state(c: &Circuit, psi0: &StateVector) -> Result<StateVector, CircuitError> {
    check_state(c, psi0)?;
    let prepared = c.prepare()?;
    let ones = vec![1.0; c.len()];
    Ok(StateVector::from_trusted(prepared.evolve(psi0.amplitudes(), &ones)))
}

/// `U_1(ε_1) ⋯ U_N(ε_N) |ψ₀⟩` with `U_k(ε) = e^{-i(1+ε)H_k}`.
pub fn perturbed_state(c: &Circuit, psi0: &StateVector, p: &PerturbationSpec) -> Result<StateVector, CircuitError> {
    check_state(c, psi0)?;
    let eps = p.per_gate_values(c.len())?;
    let multipliers: Vec<f64> = eps.iter().map(|e| 1.0 + e).collect();
    let prepared = c.prepare()?;
    Ok(StateVector::from_trusted(prepared.evolve(psi0.amplitudes(), &multipliers)))
}

/// `|⟨a, b⟩|`
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, CircuitError> {
    if a.dim() != b.dim() {
        return Err(CircuitError::StateDimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.inner(b).norm().min(1.0))
}

/// Generator of the uniform flow `ψ(t) = e^{-i(1+t)H_1} ⋯ e^{-i(1+t)H_N} ψ₀`:
/// `𝓗(t) = H_1 + e^{-i(1+t) ad H_1}(H_2) + … `.
pub fn effective_hamiltonian(c: &Circuit, t: f64) -> Result<HermitianMatrix, CircuitError> {
    let prepared = c.prepare()?;
    let hs: Vec<&HermitianMatrix> = c.hamiltonians().collect();
    let multipliers = vec![1.0 + t; c.len()];
    Ok(prepared.conjugated_sum(&hs, &multipliers, &vec![1.0; c.len()]))
}

/// Generator of `Ψ(t) = ψ(tε)` for per-gate errors:
/// `𝓗(ε, t) = ε_1 H_1 + ε_2 e^{-i(1+ε_1 t) ad H_1}(H_2) + …`.
pub fn effective_hamiltonian_multi(c: &Circuit, eps: &[f64], t: f64) -> Result<HermitianMatrix, CircuitError> {
    if eps.len() != c.len() {
        return Err(CircuitError::PerturbationLength {
            expected: c.len(),
            found: eps.len(),
        });
    }
    let prepared = c.prepare()?;
    let hs: Vec<&HermitianMatrix> = c.hamiltonians().collect();
    let multipliers: Vec<f64> = eps.iter().map(|e| 1.0 + e * t).collect();
    Ok(prepared.conjugated_sum(&hs, &multipliers, eps))
}
