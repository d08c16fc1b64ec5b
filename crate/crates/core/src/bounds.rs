//! Certified fidelity floors `|⟨ψ(ε), ψ̂⟩| ≥ 1 − M(ε̄)`.
//!
//! Three choices of `M(ε̄)` are provided:
//!
//! * [`baseline_bound`]: `(ε̄²/2)(Σ_k ‖H_k‖₂)²`, ignoring commutators entirely.
//! * [`theorem1_bound`]: `½(‖𝓗₀‖₂ + Σ_k Σ_p ε̄^p η_kp/(p+1)!)² ε̄²` for one shared
//!   relative error.
//! * [`theorem2_bound`]: the same series with `‖𝓗₀‖₂` replaced by `h₀`, valid for
//!   independent per-gate errors.
//!
//! The double series is truncated at order `P` and the certified remainder is
//! added back to `m_value`, so a report never overstates the floor.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitError};
use crate::matcore::{commutator, spectral_norm, ComplexMatrix, HermitianMatrix};

/// Default absolute tolerance on the discarded series mass.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
/// Largest truncation order tried before giving up.
pub const MAX_TRUNCATION_ORDER: usize = 60;
/// Default absolute tolerance for the crossover root.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const BRACKET_LO: f64 = 1e-9;
const BRACKET_CAP: f64 = 1e3;

#[derive(Debug, thiserror::Error)]
pub enum BoundsError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("ε̄ must be finite and nonnegative, got {0}")]
    InvalidEpsBar(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("h0 must be finite and nonnegative, got {0}")]
    InvalidH0(f64),
    #[error(
        "series tail {achieved:.3e} still above tolerance {tol:.3e} at truncation order {}; ε̄·‖H‖ is too large",
        table.truncation_order
    )]
    TailNotConverged {
        achieved: f64,
        tol: f64,
        table: Box<EtaTable>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMethod {
    Baseline,
    #[serde(rename = "thm1")]
    Theorem1,
    #[serde(rename = "thm2")]
    Theorem2,
}

impl BoundMethod {
    pub const ALL: [BoundMethod; 3] = [BoundMethod::Baseline, BoundMethod::Theorem1, BoundMethod::Theorem2];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundMethod::Baseline => "baseline",
            BoundMethod::Theorem1 => "thm1",
            BoundMethod::Theorem2 => "thm2",
        }
    }
}

impl std::fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `A_1 = H_1`, `A_k = e^{-iH_1}⋯e^{-iH_{k-1}} H_k e^{iH_{k-1}}⋯e^{iH_1}`, and
/// `𝓗₀ = Σ A_k`.
#[derive(Clone, Debug)]
pub struct ConjugatedGenerators {
    pub a: Vec<HermitianMatrix>,
    pub h0_matrix: HermitianMatrix,
    pub h0_matrix_norm: f64,
}

impl ConjugatedGenerators {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.h0_matrix.dim()
    }

    /// `Σ λ_k A_k`
    pub fn combination(&self, lambda: &[f64]) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim());
        for (a, &l) in self.a.iter().zip(lambda) {
            acc += &a.as_matrix().scale_real(l);
        }
        acc
    }
}

pub fn conjugated_generators(c: &Circuit) -> Result<ConjugatedGenerators, BoundsError> {
    let prepared = c.prepare()?;
    let hs: Vec<&HermitianMatrix> = c.hamiltonians().collect();
    let ones = vec![1.0; c.len()];
    let terms = prepared.conjugated_terms(&hs, &ones);
    let mut a: Vec<HermitianMatrix> = terms.into_iter().map(HermitianMatrix::symmetrized).collect();
    a[0] = c.gates()[0].hamiltonian.clone();
    let mut sum = ComplexMatrix::zeros(c.dim());
    for ak in &a {
        sum += ak.as_matrix();
    }
    let h0_matrix = HermitianMatrix::symmetrized(sum);
    let h0_matrix_norm = h0_matrix.spectral_norm();
    Ok(ConjugatedGenerators {
        a,
        h0_matrix,
        h0_matrix_norm,
    })
}

/// Remainder data for one `(k, j)` term of `η_kp`, enough to bound every
/// order above the truncation point.
#[derive(Clone, Debug)]
struct TailAnchor {
    /// `‖(ad H_j)^P(B_jk)‖₂` at the truncation order.
    last_term: f64,
    /// `2‖H_j‖₂`
    growth: f64,
    /// `‖H_k‖₂`
    target_norm: f64,
    /// `‖[H_j, B_jk]‖₂`, which bounds the whole series when it is tiny.
    first: f64,
}

impl TailAnchor {
    /// Bound on `Σ_{p>P} ε̄^p ‖(ad H_j)^p(B)‖/(p+1)!`.
    ///
    /// Uses `‖(ad H_j)^p(B)‖ ≤ (2‖H_j‖)^{p−P} ‖(ad H_j)^P(B)‖` and
    /// `Σ_{q≥1} y^q/(P+1+q)! ≤ y e^y/(P+2)!`, and never exceeds the
    /// generic `‖H_k‖ y^{P+1} e^y/(P+2)!` with `y = 2‖H_j‖ε̄`.
    fn bound(&self, order: usize, eps_bar: f64) -> f64 {
        let y = self.growth * eps_bar;
        if y == 0.0 || self.last_term == 0.0 {
            return 0.0;
        }
        let inv_fact = inv_factorial(order + 2);
        let ey = y.exp();
        let anchored = self.last_term * eps_bar.powi(order as i32) * y * ey * inv_fact;
        let generic = self.target_norm * y.powi(order as i32 + 1) * ey * inv_fact;
        let mut b = anchored.min(generic);
        if order == 0 {
            // Σ_{p≥1} ε̄^p (2‖H_j‖)^{p−1} ‖[H_j, B]‖/(p+1)! = ε̄ ‖[H_j, B]‖ φ(y)
            b = b.min(self.first * eps_bar * phi(y));
        }
        if b.is_nan() {
            f64::INFINITY
        } else {
            b
        }
    }
}

/// `Σ_{m≥0} y^m/(m+2)! = (e^y − 1 − y)/y²`
fn phi(y: f64) -> f64 {
    if y < 1e-3 {
        0.5 + y / 6.0 + y * y / 24.0
    } else {
        (y.exp_m1() - y) / (y * y)
    }
}

/// Truncated commutator norms
///
/// `η_kp = Σ_{j=1}^{k−1} ‖(ad H_j)^p(B_jk)‖₂`, `B_jk = e^{-iH_{j+1}}⋯e^{-iH_{k−1}} H_k e^{iH_{k−1}}⋯e^{iH_{j+1}}`
///
/// for `k = 2…N`, `p = 1…P`, together with a certified bound on the discarded
/// mass at the `ε̄` it was built for.
#[derive(Clone, Debug)]
pub struct EtaTable {
    /// `entries[k − 2][p − 1] = η_kp`
    entries: Vec<Vec<f64>>,
    pub truncation_order: usize,
    pub tail_bound: f64,
    pub eps_bar: f64,
    anchors: Vec<TailAnchor>,
}

impl EtaTable {
    /// `η_kp` with 1-based `k ∈ 2..=N`, `p ∈ 1..=P`.
    pub fn get(&self, k: usize, p: usize) -> f64 {
        self.entries[k - 2][p - 1]
    }

    /// Rows indexed by `k − 2`, each holding `η_k1 … η_kP`.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().flatten().fold(0.0, |m: f64, &x| m.max(x))
    }

    /// `Σ_k Σ_{p≤P} ε^p η_kp/(p+1)!`, summed k ascending then p ascending.
    pub fn series_at(&self, eps: f64) -> f64 {
        let mut total = 0.0;
        for row in &self.entries {
            let mut pow = 1.0;
            for (i, &eta) in row.iter().enumerate() {
                let p = i + 1;
                pow *= eps;
                total += pow * eta * inv_factorial(p + 1);
            }
        }
        total
    }

    /// Certified bound on the discarded tail at another `ε`.
    pub fn tail_at(&self, eps: f64) -> f64 {
        self.anchors
            .iter()
            .map(|a| a.bound(self.truncation_order, eps))
            .sum()
    }

    /// Truncated series at the table's own `ε̄`.
    pub fn series(&self) -> f64 {
        self.series_at(self.eps_bar)
    }
}

/// Incremental evaluator of `(ad H_j)^p(B_jk)` for all pairs `j < k`.
struct EtaBuilder {
    pairs: Vec<PairState>,
    n_gates: usize,
    order: usize,
}

struct PairState {
    k: usize,
    ad_by: ComplexMatrix,
    current: ComplexMatrix,
    anchor: TailAnchor,
}

impl EtaBuilder {
    fn new(c: &Circuit) -> Result<Self, BoundsError> {
        let prepared = c.prepare()?;
        let hs: Vec<&HermitianMatrix> = c.hamiltonians().collect();
        let norms = c.gate_norms();
        let unitaries: Vec<ComplexMatrix> = (0..c.len())
            .map(|k| prepared.gate_unitary(k, 1.0).as_matrix().clone())
            .collect();
        let mut pairs = Vec::new();
        // 0-based k, j; B starts at H_k and picks up one conjugation per step down in j.
        for k in 1..c.len() {
            let mut b = hs[k].as_matrix().clone();
            let mut per_k = Vec::with_capacity(k);
            for j in (0..k).rev() {
                if j + 1 < k {
                    let u = &unitaries[j + 1];
                    b = &(u * &b) * &u.adjoint();
                }
                let first = commutator(hs[j].as_matrix(), &b).expect("gate dimensions checked by Circuit");
                per_k.push(PairState {
                    k,
                    ad_by: hs[j].as_matrix().clone(),
                    anchor: TailAnchor {
                        last_term: spectral_norm(&b),
                        growth: 2.0 * norms[j],
                        target_norm: norms[k],
                        first: spectral_norm(&first),
                    },
                    current: b.clone(),
                });
            }
            // j ascending inside each k keeps the summation order fixed.
            per_k.reverse();
            pairs.extend(per_k);
        }
        Ok(Self {
            pairs,
            n_gates: c.len(),
            order: 0,
        })
    }

    /// Advance every pair to the next power and return `η_k,p+1` per `k`.
    fn step(&mut self) -> Vec<f64> {
        self.order += 1;
        let mut row = vec![0.0; self.n_gates.saturating_sub(1)];
        for pair in &mut self.pairs {
            pair.current = commutator(&pair.ad_by, &pair.current).expect("gate dimensions checked by Circuit");
            let norm = spectral_norm(&pair.current);
            pair.anchor.last_term = norm;
            row[pair.k - 1] += norm;
        }
        row
    }

    fn tail(&self, eps_bar: f64) -> f64 {
        self.pairs.iter().map(|p| p.anchor.bound(self.order, eps_bar)).sum()
    }

    fn finish(self, entries: Vec<Vec<f64>>, eps_bar: f64) -> EtaTable {
        let tail_bound = self.tail(eps_bar);
        EtaTable {
            entries,
            truncation_order: self.order,
            tail_bound,
            eps_bar,
            anchors: self.pairs.into_iter().map(|p| p.anchor).collect(),
        }
    }
}

fn push_row(entries: &mut [Vec<f64>], row: Vec<f64>) {
    for (dst, v) in entries.iter_mut().zip(row) {
        dst.push(v);
    }
}

/// Smallest truncation order whose certified tail is below `tol`.
///
/// Order 0 is allowed: a (numerically) commuting family then reports no
/// entries and carries the whole series in `tail_bound`.
pub fn eta_table(c: &Circuit, eps_bar: f64, tol: f64) -> Result<EtaTable, BoundsError> {
    check_eps_bar(eps_bar)?;
    check_tol(tol)?;
    let mut builder = EtaBuilder::new(c)?;
    let mut entries = vec![Vec::new(); c.len() - 1];
    while builder.tail(eps_bar) >= tol && builder.order < MAX_TRUNCATION_ORDER {
        let row = builder.step();
        push_row(&mut entries, row);
    }
    let table = builder.finish(entries, eps_bar);
    if table.tail_bound >= tol {
        return Err(BoundsError::TailNotConverged {
            achieved: table.tail_bound,
            tol,
            table: Box::new(table),
        });
    }
    Ok(table)
}

/// Table truncated at exactly `order`.
pub fn eta_table_with_order(c: &Circuit, eps_bar: f64, order: usize) -> Result<EtaTable, BoundsError> {
    check_eps_bar(eps_bar)?;
    let mut builder = EtaBuilder::new(c)?;
    let mut entries = vec![Vec::new(); c.len() - 1];
    for _ in 0..order {
        let row = builder.step();
        push_row(&mut entries, row);
    }
    Ok(builder.finish(entries, eps_bar))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub eps_bar: f64,
    /// `M(ε̄)`, including the series tail bound.
    pub m_value: f64,
    /// `max(0, 1 − m_value)`
    pub fidelity_floor: f64,
    /// Leading term inside the square: `Σ‖H_k‖₂`, `‖𝓗₀‖₂` or `h₀`.
    pub leading_norm: f64,
    pub h0: Option<f64>,
    /// Truncated double series, without the tail.
    pub series: f64,
    pub truncation_order: Option<usize>,
    pub tail_bound: f64,
}

impl BoundReport {
    fn new(method: BoundMethod, eps_bar: f64, leading_norm: f64, table: Option<&EtaTable>) -> Self {
        let (series, tail_bound, truncation_order) = match table {
            Some(t) => (t.series(), t.tail_bound, Some(t.truncation_order)),
            None => (0.0, 0.0, None),
        };
        let m_value = 0.5 * (leading_norm + series + tail_bound).powi(2) * eps_bar * eps_bar;
        Self {
            method,
            eps_bar,
            m_value,
            fidelity_floor: floor_from_m(m_value),
            leading_norm,
            h0: None,
            series,
            truncation_order,
            tail_bound,
        }
    }
}

pub fn floor_from_m(m: f64) -> f64 {
    (1.0 - m).max(0.0)
}

/// `M = (ε̄²/2)(Σ‖H_k‖₂)²`
pub fn baseline_bound(c: &Circuit, eps_bar: f64) -> Result<BoundReport, BoundsError> {
    check_eps_bar(eps_bar)?;
    let total: f64 = c.gate_norms().iter().sum();
    Ok(BoundReport::new(BoundMethod::Baseline, eps_bar, total, None))
}

/// `M = ½(‖𝓗₀‖₂ + Σ_k Σ_p ε̄^p η_kp/(p+1)!)² ε̄²` for a shared relative error.
pub fn theorem1_bound(c: &Circuit, eps_bar: f64, tol: f64) -> Result<BoundReport, BoundsError> {
    let table = eta_table(c, eps_bar, tol)?;
    let gens = conjugated_generators(c)?;
    Ok(BoundReport::new(BoundMethod::Theorem1, eps_bar, gens.h0_matrix_norm, Some(&table)))
}

/// `M = ½(h₀ + Σ_k Σ_p ε̄^p η_kp/(p+1)!)² ε̄²` for independent per-gate errors.
///
/// `h0` must not underestimate the true maximum; an exact value or the
/// triangle upper bound from [`crate::h0solver`] both keep the floor certified.
pub fn theorem2_bound(c: &Circuit, eps_bar: f64, tol: f64, h0: f64) -> Result<BoundReport, BoundsError> {
    if !(h0.is_finite() && h0 >= 0.0) {
        return Err(BoundsError::InvalidH0(h0));
    }
    let table = eta_table(c, eps_bar, tol)?;
    let mut report = BoundReport::new(BoundMethod::Theorem2, eps_bar, h0, Some(&table));
    report.h0 = Some(h0);
    Ok(report)
}

/// Where the per-gate bound stops beating the baseline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Crossover {
    /// Unique positive root; `Root(0.0)` when `h₀ = Σ‖H_k‖₂`.
    Root(f64),
    /// The generators commute (numerically), or no sign change occurs below
    /// the bracket cap: the per-gate bound wins for every tested `ε̄`.
    Unbounded,
}

/// [`epsilon_max_with_h0`] with `h₀` from [`crate::h0solver::h0_auto`].
pub fn epsilon_max(c: &Circuit, tol: f64) -> Result<Crossover, BoundsError> {
    let h0 = crate::h0solver::h0_auto(c)?.result.value;
    epsilon_max_with_h0(c, h0, tol)
}

/// Positive root of `ε̄ Σ_k Σ_p η_kp ε̄^{p−1}/(p+1)! = Σ‖H_k‖₂ − h₀`.
pub fn epsilon_max_with_h0(c: &Circuit, h0: f64, tol: f64) -> Result<Crossover, BoundsError> {
    check_tol(tol)?;
    if !(h0.is_finite() && h0 >= 0.0) {
        return Err(BoundsError::InvalidH0(h0));
    }
    let norm_sum: f64 = c.gate_norms().iter().sum();
    let gap = norm_sum - h0;
    if gap <= 1e-12 {
        return Ok(Crossover::Root(0.0));
    }
    let table = eta_table_with_order(c, 0.0, MAX_TRUNCATION_ORDER)?;
    let first_order_max = table.rows().iter().map(|r| r[0]).fold(0.0, f64::max);
    if first_order_max <= 1e-12 * norm_sum.powi(2).max(1.0) {
        return Ok(Crossover::Unbounded);
    }

    let excess = |e: f64| {
        let v = table.series_at(e) + table.tail_at(e) - gap;
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let (mut lo, mut hi) = if excess(BRACKET_LO) >= 0.0 {
        (0.0, BRACKET_LO)
    } else {
        let mut hi = 1.0_f64;
        while excess(hi) < 0.0 {
            if hi >= BRACKET_CAP {
                return Ok(Crossover::Unbounded);
            }
            hi = (2.0 * hi).min(BRACKET_CAP);
        }
        (BRACKET_LO, hi)
    };
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Crossover::Root(0.5 * (lo + hi)))
}

fn check_eps_bar(eps_bar: f64) -> Result<(), BoundsError> {
    if eps_bar.is_finite() && eps_bar >= 0.0 {
        Ok(())
    } else {
        Err(BoundsError::InvalidEpsBar(eps_bar))
    }
}

fn check_tol(tol: f64) -> Result<(), BoundsError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(BoundsError::InvalidTolerance(tol))
    }
}

fn inv_factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc / i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::matcore::{pauli_x, pauli_y, pauli_z, Complex64};
    use std::f64::consts::PI;

    fn example1() -> Circuit {
        Circuit::new(vec![Gate::rz(PI / 4.0), Gate::ry(PI / 2.0)]).unwrap()
    }

    fn h0_example1() -> f64 {
        PI * 5f64.sqrt() / 8.0
    }

    #[test]
    fn generators_of_example1() {
        let g = conjugated_generators(&example1()).unwrap();
        let tz = PI / 4.0;
        let a2 = (&pauli_y().as_matrix().scale_real(tz.cos()) - &pauli_x().as_matrix().scale_real(tz.sin()))
            .scale_real(PI / 4.0);
        assert!(spectral_norm(&(g.a[1].as_matrix() - &a2)) < 1e-14);
        assert_eq!(g.a[0], pauli_z().scale(PI / 8.0));
        assert!((g.a[1].spectral_norm() - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn single_gate_generators() {
        let h = pauli_x().scale(0.7);
        let c = Circuit::from_hamiltonians(vec![h.clone()]).unwrap();
        let g = conjugated_generators(&c).unwrap();
        assert_eq!(g.a[0], h);
        assert_eq!(g.h0_matrix, h);
    }

    #[test]
    fn commuting_family_generators_unchanged() {
        let d1 = HermitianMatrix::from_real_diagonal(&[2.0, 1.0, -1.0]);
        let d2 = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 0.5]);
        let c = Circuit::from_hamiltonians(vec![d1.clone(), d2.clone()]).unwrap();
        let g = conjugated_generators(&c).unwrap();
        assert!(spectral_norm(&(g.a[1].as_matrix() - d2.as_matrix())) < 1e-15);
        let table = eta_table(&c, 0.3, 1e-12).unwrap();
        assert_eq!(table.max_entry(), 0.0);
        assert_eq!(table.tail_bound, 0.0);
    }

    #[test]
    fn nearly_commuting_family_truncates_at_zero() {
        // Commutes only up to rounding: V D V† with an irrational basis.
        let v = crate::matcore::unitary_exp(&pauli_x().add(&pauli_y()).unwrap(), 0.7).unwrap();
        let conj = |d: &[f64]| {
            let m = v.as_matrix();
            HermitianMatrix::symmetrized(&(m * &ComplexMatrix::from_real_diagonal(d)) * &m.adjoint())
        };
        let c = Circuit::from_hamiltonians(vec![conj(&[2.5, -0.5]), conj(&[-3.0, 1.0])]).unwrap();
        let deep = eta_table_with_order(&c, 1.0, 20).unwrap();
        let table = eta_table(&c, 1.0, 1e-12).unwrap();
        assert_eq!(table.truncation_order, 0);
        assert_eq!(table.max_entry(), 0.0);
        assert!(deep.series() <= table.tail_bound);
        assert!(table.tail_bound < 1e-12);
    }

    #[test]
    fn eta_of_example1_closed_form() {
        let table = eta_table_with_order(&example1(), 0.2, 12).unwrap();
        let (ty, tz) = (PI / 2.0, PI / 4.0);
        for p in 1..=12 {
            let expected = ty * tz.powi(p as i32) / 2.0;
            assert!((table.get(2, p) - expected).abs() < 1e-12 * expected.max(1.0), "p = {p}");
        }
    }

    #[test]
    fn eta_first_order_is_commutator_norm() {
        let h1 = HermitianMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![Complex64::new(0.4, 0.0), Complex64::new(0.3, -0.9)],
                vec![Complex64::new(0.3, 0.9), Complex64::new(-1.2, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let h2 = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[1.5, -0.2], &[-0.2, 0.1]]).unwrap()).unwrap();
        let c = Circuit::from_hamiltonians(vec![h1.clone(), h2.clone()]).unwrap();
        let table = eta_table_with_order(&c, 0.1, 1).unwrap();
        let direct = spectral_norm(&commutator(h1.as_matrix(), h2.as_matrix()).unwrap());
        assert!((table.get(2, 1) - direct).abs() < 1e-13);
    }

    #[test]
    fn tail_below_tolerance() {
        let table = eta_table(&example1(), 0.2, 1e-12).unwrap();
        assert!(table.tail_bound < 1e-12);
        assert!(table.truncation_order > 0 && table.truncation_order < MAX_TRUNCATION_ORDER);
    }

    #[test]
    fn tail_cap_is_reported() {
        let big = pauli_x().scale(40.0);
        let c = Circuit::from_hamiltonians(vec![big, pauli_z().scale(40.0)]).unwrap();
        match eta_table(&c, 1.0, 1e-12) {
            Err(BoundsError::TailNotConverged { table, achieved, .. }) => {
                assert_eq!(table.truncation_order, MAX_TRUNCATION_ORDER);
                assert!(achieved >= 1e-12);
            }
            other => panic!("expected TailNotConverged, got {other:?}"),
        }
    }

    #[test]
    fn example1_baseline_and_theorem2() {
        let base = baseline_bound(&example1(), 0.2).unwrap();
        let expected_m = 0.04 / 8.0 * (3.0 * PI / 4.0).powi(2);
        assert!((base.m_value - expected_m).abs() < 1e-15);
        assert!((base.fidelity_floor - 0.97224174).abs() < 1e-6);

        let t2 = theorem2_bound(&example1(), 0.2, 1e-12, h0_example1()).unwrap();
        assert!((t2.fidelity_floor - 0.9822095).abs() < 1e-5);
        assert!(t2.tail_bound <= 1e-12);
        assert_eq!(t2.h0, Some(h0_example1()));
    }

    #[test]
    fn zero_eps_bar_is_exact() {
        for report in [
            baseline_bound(&example1(), 0.0).unwrap(),
            theorem1_bound(&example1(), 0.0, 1e-12).unwrap(),
            theorem2_bound(&example1(), 0.0, 1e-12, 1.0).unwrap(),
        ] {
            assert_eq!(report.m_value, 0.0);
            assert_eq!(report.fidelity_floor, 1.0);
        }
    }

    #[test]
    fn single_gate_theorem1_equals_baseline() {
        let c = Circuit::from_hamiltonians(vec![pauli_y().scale(1.3)]).unwrap();
        let t1 = theorem1_bound(&c, 0.15, 1e-12).unwrap();
        let base = baseline_bound(&c, 0.15).unwrap();
        assert!((t1.m_value - base.m_value).abs() < 1e-15);
        assert_eq!(t1.truncation_order, Some(0));
    }

    #[test]
    fn commuting_theorem2_beats_baseline() {
        let c = Circuit::from_hamiltonians(vec![
            HermitianMatrix::from_real_diagonal(&[2.0, 1.0]),
            HermitianMatrix::from_real_diagonal(&[1.0, 2.0]),
        ])
        .unwrap();
        for eps in [0.01, 0.1, 0.5, 1.0] {
            let t2 = theorem2_bound(&c, eps, 1e-12, 3.0).unwrap();
            let base = baseline_bound(&c, eps).unwrap();
            assert!((t2.m_value - 4.5 * eps * eps).abs() < 1e-12);
            assert!((base.m_value - 8.0 * eps * eps).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(baseline_bound(&example1(), -0.1), Err(BoundsError::InvalidEpsBar(_))));
        assert!(matches!(theorem1_bound(&example1(), 0.1, 0.0), Err(BoundsError::InvalidTolerance(_))));
        assert!(matches!(theorem2_bound(&example1(), 0.1, 1e-12, f64::NAN), Err(BoundsError::InvalidH0(_))));
    }

    #[test]
    fn crossover_cases() {
        match epsilon_max_with_h0(&example1(), h0_example1(), 1e-10).unwrap() {
            Crossover::Root(r) => assert!((r - 0.759).abs() < 0.05, "root {r}"),
            other => panic!("{other:?}"),
        }
        let commuting = Circuit::from_hamiltonians(vec![
            HermitianMatrix::from_real_diagonal(&[2.0, 1.0]),
            HermitianMatrix::from_real_diagonal(&[1.0, 2.0]),
        ])
        .unwrap();
        assert_eq!(epsilon_max_with_h0(&commuting, 3.0, 1e-10).unwrap(), Crossover::Unbounded);
        let dup = Circuit::from_hamiltonians(vec![pauli_z(), pauli_z()]).unwrap();
        assert_eq!(epsilon_max_with_h0(&dup, 2.0, 1e-10).unwrap(), Crossover::Root(0.0));
    }
}
