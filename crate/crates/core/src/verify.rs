//! Empirical checks behind every emitted floor: Monte Carlo sampling of the
//! fidelity, the nested-conjugation identity, the commutator-series majorant
//! and an ODE integration of the effective Hamiltonian flow.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{eta_table_with_order, BoundMethod, BoundsError};
use crate::circuit::{Circuit, CircuitError, PerturbationMode, PreparedCircuit, StateVector};
use crate::matcore::{ad_exp_series, conjugate, spectral_norm, Complex64, ComplexMatrix, HermitianMatrix, MatError};

/// A sample violates a floor when its fidelity is below `floor − VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-9;
pub const DEFAULT_ODE_STEP: f64 = 1e-3;
/// Truncation order used for the majorant series in the appendix checks.
pub const DEFAULT_MAJORANT_ORDER: usize = 30;
/// Samples that also run the identity and majorant checks.
const APPENDIX_SAMPLES: usize = 16;
const SERIES_TOL: f64 = 1e-14;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Bounds(#[from] Box<BoundsError>),
    #[error("invalid verification config: {0}")]
    InvalidConfig(String),
    #[error("{method} floor is not valid under {mode:?} sampling")]
    ModeMismatch { method: BoundMethod, mode: PerturbationMode },
    #[error("perturbation vector has {found} entries, circuit has {expected} gates")]
    PerturbationLength { expected: usize, found: usize },
}

impl From<BoundsError> for VerifyError {
    fn from(e: BoundsError) -> Self {
        VerifyError::Bounds(Box::new(e))
    }
}

#[derive(Clone, Debug)]
pub struct VerificationConfig {
    pub samples: usize,
    pub seed: u64,
    pub eps_bar: f64,
    pub mode: PerturbationMode,
    /// RK4 step for [`ode_crosscheck`].
    pub step: f64,
    /// Defaults to `|0⟩`.
    pub initial_state: Option<StateVector>,
}

impl VerificationConfig {
    pub fn new(samples: usize, seed: u64, eps_bar: f64, mode: PerturbationMode) -> Self {
        Self {
            samples,
            seed,
            eps_bar,
            mode,
            step: DEFAULT_ODE_STEP,
            initial_state: None,
        }
    }

    fn validate(&self) -> Result<(), VerifyError> {
        if self.samples == 0 {
            return Err(VerifyError::InvalidConfig("samples must be at least 1".into()));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(VerifyError::InvalidConfig(format!("step must be positive, got {}", self.step)));
        }
        if !(self.eps_bar.is_finite() && self.eps_bar >= 0.0) {
            return Err(VerifyError::InvalidConfig(format!(
                "eps_bar must be finite and nonnegative, got {}",
                self.eps_bar
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodCheck {
    pub floor: f64,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixResiduals {
    /// Largest product-side vs nested-conjugation mismatch.
    pub appendix_a: f64,
    /// Smallest majorant slack (negative means the inequality failed).
    pub appendix_b_slack: f64,
    /// Largest ad-series vs conjugation mismatch.
    pub hadamard: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub samples: usize,
    pub seed: u64,
    pub eps_bar: f64,
    pub mode: PerturbationMode,
    pub min_fidelity: f64,
    /// Samples below at least one floor by more than [`VIOLATION_TOL`].
    pub violations: usize,
    pub worst_index: usize,
    /// Per-gate `ε` of the worst sample.
    pub worst_sample: Vec<f64>,
    pub per_method_floors: BTreeMap<BoundMethod, f64>,
    pub per_method: BTreeMap<BoundMethod, MethodCheck>,
    pub appendix_residuals: Option<AppendixResiduals>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
            && self
                .appendix_residuals
                .as_ref()
                .is_none_or(|r| r.appendix_a <= 1e-10 && r.appendix_b_slack >= -1e-10 && r.hadamard <= 1e-10)
    }
}

/// Per-gate errors for sample `index`, drawn from its own ChaCha stream so
/// the value depends only on `(seed, index)`.
pub fn sample_perturbation(seed: u64, index: u64, mode: PerturbationMode, eps_bar: f64, n_gates: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    match mode {
        PerturbationMode::Uniform => vec![rng.random_range(-eps_bar..=eps_bar); n_gates],
        PerturbationMode::PerGate => (0..n_gates).map(|_| rng.random_range(-eps_bar..=eps_bar)).collect(),
    }
}

fn check_modes(floors: &BTreeMap<BoundMethod, f64>, mode: PerturbationMode) -> Result<(), VerifyError> {
    for &method in floors.keys() {
        let ok = match method {
            BoundMethod::Baseline => true,
            BoundMethod::Theorem1 => mode == PerturbationMode::Uniform,
            BoundMethod::Theorem2 => mode == PerturbationMode::PerGate,
        };
        if !ok {
            return Err(VerifyError::ModeMismatch { method, mode });
        }
    }
    Ok(())
}

/// Sample `|⟨ψ(ε), ψ̂⟩|` and count samples below any of `floors`.
pub fn monte_carlo_check(
    c: &Circuit,
    cfg: &VerificationConfig,
    floors: &BTreeMap<BoundMethod, f64>,
) -> Result<VerificationReport, VerifyError> {
    cfg.validate()?;
    check_modes(floors, cfg.mode)?;
    let psi0 = match &cfg.initial_state {
        Some(s) if s.dim() != c.dim() => {
            return Err(CircuitError::StateDimension {
                expected: c.dim(),
                found: s.dim(),
            }
            .into())
        }
        Some(s) => s.clone(),
        None => StateVector::basis(c.dim(), 0),
    };
    let prepared = c.prepare()?;
    let n = c.len();
    let ideal = prepared.evolve(psi0.amplitudes(), &vec![1.0; n]);

    let fidelities: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let eps = sample_perturbation(cfg.seed, i as u64, cfg.mode, cfg.eps_bar, n);
            let multipliers: Vec<f64> = eps.iter().map(|e| 1.0 + e).collect();
            let psi = prepared.evolve(psi0.amplitudes(), &multipliers);
            let overlap: Complex64 = psi.iter().zip(&ideal).map(|(a, b)| a.conj() * b).sum();
            overlap.norm().min(1.0)
        })
        .collect();

    let mut worst_index = 0;
    for (i, &f) in fidelities.iter().enumerate() {
        if f < fidelities[worst_index] {
            worst_index = i;
        }
    }
    let per_method: BTreeMap<BoundMethod, MethodCheck> = floors
        .iter()
        .map(|(&m, &floor)| {
            let violations = fidelities.iter().filter(|&&f| f < floor - VIOLATION_TOL).count();
            (m, MethodCheck { floor, violations })
        })
        .collect();
    let highest = floors.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let violations = fidelities.iter().filter(|&&f| f < highest - VIOLATION_TOL).count();

    let appendix_residuals = if n >= 2 {
        let checks: Vec<Result<(f64, f64, f64), VerifyError>> = (0..cfg.samples.min(APPENDIX_SAMPLES))
            .into_par_iter()
            .map(|i| {
                let eps = sample_perturbation(cfg.seed, i as u64, cfg.mode, cfg.eps_bar, n);
                let a = appendix_a_check(c, 1.0, &eps)?;
                let b = appendix_b_check(c, 1.0, &eps, DEFAULT_MAJORANT_ORDER)?;
                let h = hadamard_check(&c.gates()[0].hamiltonian, &c.gates()[1].hamiltonian, 1.0 + eps[0])?;
                Ok((a, b, h))
            })
            .collect();
        let mut acc = AppendixResiduals {
            appendix_a: 0.0,
            appendix_b_slack: f64::INFINITY,
            hadamard: 0.0,
        };
        for r in checks {
            let (a, b, h) = r?;
            acc.appendix_a = acc.appendix_a.max(a);
            acc.appendix_b_slack = acc.appendix_b_slack.min(b);
            acc.hadamard = acc.hadamard.max(h);
        }
        Some(acc)
    } else {
        None
    };

    Ok(VerificationReport {
        samples: cfg.samples,
        seed: cfg.seed,
        eps_bar: cfg.eps_bar,
        mode: cfg.mode,
        min_fidelity: fidelities[worst_index],
        violations,
        worst_index,
        worst_sample: sample_perturbation(cfg.seed, worst_index as u64, cfg.mode, cfg.eps_bar, n),
        per_method_floors: floors.clone(),
        per_method,
        appendix_residuals,
    })
}

fn check_eps_len(c: &Circuit, eps: &[f64]) -> Result<(), VerifyError> {
    if eps.len() != c.len() {
        return Err(VerifyError::PerturbationLength {
            expected: c.len(),
            found: eps.len(),
        });
    }
    Ok(())
}

/// `max_k ‖U_1⋯U_{k−1} H_k − [e^{−i m_1 ad H_1}⋯e^{−i m_{k−1} ad H_{k−1}}(H_k)] U_1⋯U_{k−1}‖₂`
/// with `m_j = 1 + ε_j t`. The product side uses the spectral exponentials;
/// the nested side uses the ad-series, so the two are computed independently.
pub fn appendix_a_check(c: &Circuit, t: f64, eps: &[f64]) -> Result<f64, VerifyError> {
    check_eps_len(c, eps)?;
    let prepared = c.prepare()?;
    let hs: Vec<&HermitianMatrix> = c.hamiltonians().collect();
    let mult: Vec<f64> = eps.iter().map(|e| 1.0 + e * t).collect();
    let mut product = ComplexMatrix::identity(c.dim());
    let mut worst: f64 = 0.0;
    for k in 1..c.len() {
        product = product * prepared.gate_unitary(k - 1, mult[k - 1]).as_matrix();
        let lhs = &product * hs[k].as_matrix();
        let mut nested = hs[k].as_matrix().clone();
        for j in (0..k).rev() {
            nested = ad_exp_series(hs[j].as_matrix(), &nested, Complex64::new(0.0, -mult[j]), SERIES_TOL)?;
        }
        let rhs = &nested * &product;
        worst = worst.max(spectral_norm(&(&lhs - &rhs)));
    }
    Ok(worst)
}

/// `min_k (RHS_k − LHS_k)` for the majorant
///
/// `‖e^{−i(1+ε_1 t) ad H_1}⋯(H_k) − e^{−i ad H_1}⋯(H_k)‖₂ ≤ Σ_p (ε̄|t|)^p/p! Σ_j ‖(ad H_j)^p(B_jk)‖₂`
///
/// with `ε̄ = max|ε_j|`, the series cut at `trunc` and its remainder bounded
/// by `‖H_k‖ y^{P+1} e^y/(P+1)!`, `y = 2‖H_j‖ε̄|t|`.
pub fn appendix_b_check(c: &Circuit, t: f64, eps: &[f64], trunc: usize) -> Result<f64, VerifyError> {
    check_eps_len(c, eps)?;
    let prepared = c.prepare()?;
    let hs: Vec<&HermitianMatrix> = c.hamiltonians().collect();
    let norms = c.gate_norms();
    let eps_bar = eps.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let s = eps_bar * t.abs();
    let table = eta_table_with_order(c, 0.0, trunc)?;
    let mult: Vec<f64> = eps.iter().map(|e| 1.0 + e * t).collect();
    let perturbed = prepared.conjugated_terms(&hs, &mult);
    let ideal = prepared.conjugated_terms(&hs, &vec![1.0; c.len()]);

    let mut slack = f64::INFINITY;
    for k in 1..c.len() {
        let lhs = spectral_norm(&(&perturbed[k] - &ideal[k]));
        let mut rhs = 0.0;
        let mut coef = 1.0;
        for p in 1..=trunc {
            coef *= s / p as f64;
            rhs += coef * table.get(k + 1, p);
        }
        rhs += (0..k).map(|j| majorant_tail(norms[k], 2.0 * norms[j] * s, trunc)).sum::<f64>();
        slack = slack.min(rhs - lhs);
    }
    Ok(slack)
}

/// `b · y^{P+1} e^y/(P+1)!`
fn majorant_tail(b: f64, y: f64, order: usize) -> f64 {
    if y == 0.0 || b == 0.0 {
        return 0.0;
    }
    let mut v = b * y.exp();
    for q in 1..=order + 1 {
        v *= y / q as f64;
    }
    v
}

/// `‖Σ_p (−i m)^p (ad A)^p(B)/p! − e^{−imA} B e^{imA}‖₂`
pub fn hadamard_check(a: &HermitianMatrix, b: &HermitianMatrix, m: f64) -> Result<f64, VerifyError> {
    let series = ad_exp_series(a.as_matrix(), b.as_matrix(), Complex64::new(0.0, -m), SERIES_TOL)?;
    let u = crate::matcore::unitary_exp(a, m)?;
    let conj = conjugate(&u, b.as_matrix())?;
    Ok(spectral_norm(&(&series - &conj)))
}

/// Integrate `ψ′ = −i𝓗(t)ψ` with RK4 from `ψ(0) = ψ̂` to `t = ε` and return
/// the distance to the product formula `e^{−i(1+ε)H_1}⋯e^{−i(1+ε)H_N}|0⟩`.
pub fn ode_crosscheck(c: &Circuit, eps: f64, step: f64) -> Result<f64, VerifyError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(VerifyError::InvalidConfig(format!("step must be positive, got {step}")));
    }
    if !eps.is_finite() {
        return Err(VerifyError::InvalidConfig(format!("eps must be finite, got {eps}")));
    }
    let prepared = c.prepare()?;
    let n = c.len();
    let psi0 = StateVector::basis(c.dim(), 0);
    let mut psi = prepared.evolve(psi0.amplitudes(), &vec![1.0; n]);
    let target = prepared.evolve(psi0.amplitudes(), &vec![1.0 + eps; n]);

    let steps = (eps.abs() / step).ceil() as usize;
    if steps > 0 {
        let h = eps / steps as f64;
        let hs: Vec<&HermitianMatrix> = c.hamiltonians().collect();
        let rhs = |t: f64, v: &[Complex64]| -> Vec<Complex64> { flow_rhs(&prepared, &hs, t, v) };
        for i in 0..steps {
            let t = i as f64 * h;
            let k1 = rhs(t, &psi);
            let k2 = rhs(t + 0.5 * h, &axpy(&psi, 0.5 * h, &k1));
            let k3 = rhs(t + 0.5 * h, &axpy(&psi, 0.5 * h, &k2));
            let k4 = rhs(t + h, &axpy(&psi, h, &k3));
            for (j, p) in psi.iter_mut().enumerate() {
                *p += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
            }
        }
    }
    Ok(psi
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

fn flow_rhs(prepared: &PreparedCircuit, hs: &[&HermitianMatrix], t: f64, v: &[Complex64]) -> Vec<Complex64> {
    let n = hs.len();
    let h = prepared.conjugated_sum(hs, &vec![1.0 + t; n], &vec![1.0; n]);
    let minus_i = Complex64::new(0.0, -1.0);
    h.as_matrix()
        .apply(v)
        .expect("state dimension matches circuit")
        .into_iter()
        .map(|z| z * minus_i)
        .collect()
}

fn axpy(x: &[Complex64], a: f64, y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(xi, yi)| xi + yi * a).collect()
}
