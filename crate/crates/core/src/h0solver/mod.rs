//! `h₀ = max_{‖λ‖_∞ = 1} ‖λ₁A₁ + … + λ_N A_N‖₂`.
//!
//! The map `λ ↦ ‖Σ λ_k A_k‖₂` is convex, so its maximum over the cube sits at
//! a vertex; flipping every sign leaves the norm unchanged, which pins
//! `λ₁ = +1` and leaves `2^{N−1}` candidates.

mod appendix_c;
pub mod poly;

pub use appendix_c::{
    h0_appendix_c, norm2x2, AppendixCData, PencilBranch, PencilInvariants, PencilOrder, RejectReason, RejectedPoint,
};
pub use poly::{poly_real_roots_in_open_interval, PolyError};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{conjugated_generators, BoundsError, ConjugatedGenerators};
use crate::circuit::Circuit;
use crate::matcore::HermitianMatrix;

/// Largest generator count accepted by vertex enumeration.
pub const MAX_VERTEX_GENERATORS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum H0Method {
    VertexEnum,
    AppendixC,
    TriangleUpper,
}

impl H0Method {
    pub fn as_str(self) -> &'static str {
        match self {
            H0Method::VertexEnum => "vertex-enum",
            H0Method::AppendixC => "appendix-c",
            H0Method::TriangleUpper => "triangle-upper",
        }
    }
}

impl std::fmt::Display for H0Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum H0Witness {
    /// Attaining sign vector `λ ∈ {±1}^N`.
    Signs(Vec<f64>),
    /// `‖A + xB‖₂` for [`PencilOrder::AB`], `‖xA + B‖₂` for [`PencilOrder::BA`].
    Pencil { x: f64, order: PencilOrder },
}

impl H0Witness {
    pub fn lambda(&self) -> Vec<f64> {
        match self {
            H0Witness::Signs(s) => s.clone(),
            H0Witness::Pencil { x, order: PencilOrder::AB } => vec![1.0, *x],
            H0Witness::Pencil { x, order: PencilOrder::BA } => vec![*x, 1.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H0Result {
    pub value: f64,
    pub method: H0Method,
    pub witness: Option<H0Witness>,
    pub is_upper_bound_only: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum H0Error {
    #[error("closed form needs 2x2 matrices, got {dim}x{dim}")]
    NotTwoByTwo { dim: usize },
    #[error("nondegeneracy condition fails for ordering {order} (value {appc0:.3e}); fall back to vertex enumeration")]
    DegenerateConfiguration {
        order: PencilOrder,
        appc0: f64,
        data: Box<AppendixCData>,
    },
    #[error("singular values coincide at x = {point:.6} for ordering {order}; fall back to vertex enumeration")]
    ConditionCViolated {
        order: PencilOrder,
        point: f64,
        data: Box<AppendixCData>,
    },
    #[error("vertex enumeration limited to {cap} generators, got {n}; use the triangle upper bound")]
    TooManyGenerators { n: usize, cap: usize },
    #[error("vertex enumeration needs at least one generator")]
    NoGenerators,
}

/// Exact `h₀` by enumerating sign vectors with `λ₁ = +1`. Ties go to the
/// lexicographically smallest vector (with −1 < +1).
pub fn h0_vertex_enum(gens: &ConjugatedGenerators) -> Result<H0Result, H0Error> {
    let n = gens.len();
    if n == 0 {
        return Err(H0Error::NoGenerators);
    }
    if n > MAX_VERTEX_GENERATORS {
        return Err(H0Error::TooManyGenerators {
            n,
            cap: MAX_VERTEX_GENERATORS,
        });
    }
    let count = 1usize << (n - 1);
    let norms: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|mask| {
            let comb = gens.combination(&signs(mask, n));
            HermitianMatrix::symmetrized(comb).spectral_norm()
        })
        .collect();
    let mut best = 0;
    for (mask, &v) in norms.iter().enumerate() {
        if v > norms[best] {
            best = mask;
        }
    }
    Ok(H0Result {
        value: norms[best],
        method: H0Method::VertexEnum,
        witness: Some(H0Witness::Signs(signs(best, n))),
        is_upper_bound_only: false,
    })
}

/// `λ₁ = +1`; `λ₂ … λ_N` read from `mask` most significant bit first, so
/// ascending masks are lexicographic order.
fn signs(mask: usize, n: usize) -> Vec<f64> {
    let mut s = vec![1.0; n];
    for (k, sk) in s.iter_mut().enumerate().skip(1) {
        if mask >> (n - 1 - k) & 1 == 0 {
            *sk = -1.0;
        }
    }
    s
}

/// `Σ ‖H_k‖₂`, always a valid (possibly loose) upper bound.
pub fn h0_triangle_upper(c: &Circuit) -> H0Result {
    H0Result {
        value: c.gate_norms().iter().sum(),
        method: H0Method::TriangleUpper,
        witness: None,
        is_upper_bound_only: true,
    }
}

/// An `h₀` value together with the reasons any preferred method was skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H0Selection {
    pub result: H0Result,
    pub fallbacks: Vec<String>,
}

/// Closed form for two 2×2 generators, then vertex enumeration, then the
/// triangle bound.
pub fn h0_auto(c: &Circuit) -> Result<H0Selection, BoundsError> {
    let gens = conjugated_generators(c)?;
    Ok(h0_auto_with(c, &gens))
}

///
/// An exact value that lands above `Σ‖H_k‖₂` by rounding is clamped to it.
pub fn h0_auto_with(c: &Circuit, gens: &ConjugatedGenerators) -> H0Selection {
    let mut fallbacks = Vec::new();
    let cap = h0_triangle_upper(c).value;
    let clamp = |mut r: H0Result| {
        r.value = r.value.min(cap);
        r
    };
    if gens.len() == 2 && gens.dim() == 2 {
        match h0_appendix_c(gens.a[0].as_matrix(), gens.a[1].as_matrix()) {
            Ok((result, _)) => {
                return H0Selection {
                    result: clamp(result),
                    fallbacks,
                }
            }
            Err(e) => fallbacks.push(format!("appendix-c: {e}")),
        }
    }
    match h0_vertex_enum(gens) {
        Ok(result) => H0Selection {
            result: clamp(result),
            fallbacks,
        },
        Err(e) => {
            fallbacks.push(format!("vertex-enum: {e}"));
            H0Selection {
                result: h0_triangle_upper(c),
                fallbacks,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::matcore::{pauli_x, pauli_z, spectral_norm};
    use std::f64::consts::PI;

    fn example1() -> Circuit {
        Circuit::new(vec![Gate::rz(PI / 4.0), Gate::ry(PI / 2.0)]).unwrap()
    }

    #[test]
    fn sign_order_is_lexicographic() {
        assert_eq!(signs(0, 3), vec![1.0, -1.0, -1.0]);
        assert_eq!(signs(1, 3), vec![1.0, -1.0, 1.0]);
        assert_eq!(signs(2, 3), vec![1.0, 1.0, -1.0]);
        assert_eq!(signs(3, 3), vec![1.0, 1.0, 1.0]);
        assert_eq!(signs(0, 1), vec![1.0]);
    }

    #[test]
    fn single_generator() {
        let c = Circuit::from_hamiltonians(vec![pauli_x().scale(0.8)]).unwrap();
        let gens = conjugated_generators(&c).unwrap();
        let r = h0_vertex_enum(&gens).unwrap();
        assert!((r.value - 0.8).abs() < 1e-14);
        let t = h0_triangle_upper(&c);
        assert!((t.value - 0.8).abs() < 1e-14 && t.is_upper_bound_only);
    }

    #[test]
    fn example1_three_ways() {
        let c = example1();
        let gens = conjugated_generators(&c).unwrap();
        let expected = PI * 5f64.sqrt() / 8.0;
        let v = h0_vertex_enum(&gens).unwrap();
        assert!((v.value - expected).abs() < 1e-12);
        let lambda = v.witness.unwrap().lambda();
        assert!((spectral_norm(&gens.combination(&lambda)) - v.value).abs() < 1e-10);
        let (a, _) = h0_appendix_c(gens.a[0].as_matrix(), gens.a[1].as_matrix()).unwrap();
        assert!((a.value - v.value).abs() < 1e-12);
        assert!((h0_triangle_upper(&c).value - 3.0 * PI / 8.0).abs() < 1e-12);
        let auto = h0_auto(&c).unwrap();
        assert_eq!(auto.result.method, H0Method::AppendixC);
        assert!(auto.fallbacks.is_empty());
    }

    #[test]
    fn commuting_diagonal_pair() {
        let c = Circuit::from_hamiltonians(vec![
            HermitianMatrix::from_real_diagonal(&[2.0, 1.0]),
            HermitianMatrix::from_real_diagonal(&[1.0, 2.0]),
        ])
        .unwrap();
        let gens = conjugated_generators(&c).unwrap();
        let v = h0_vertex_enum(&gens).unwrap();
        assert!((v.value - 3.0).abs() < 1e-12);
        assert_eq!(v.witness, Some(H0Witness::Signs(vec![1.0, 1.0])));
        assert!((h0_triangle_upper(&c).value - 4.0).abs() < 1e-12);
        // Equal traces keep the trace zero at x = -1, outside the open interval.
        let auto = h0_auto(&c).unwrap();
        assert_eq!(auto.result.method, H0Method::AppendixC);
        assert!((auto.result.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_refusal_falls_back() {
        let c = Circuit::from_hamiltonians(vec![
            HermitianMatrix::from_real_diagonal(&[2.0, 1.0]),
            HermitianMatrix::from_real_diagonal(&[1.0, 3.0]),
        ])
        .unwrap();
        let auto = h0_auto(&c).unwrap();
        assert_eq!(auto.result.method, H0Method::VertexEnum);
        assert_eq!(auto.fallbacks.len(), 1);
        assert!(auto.fallbacks[0].starts_with("appendix-c"));
        assert!((auto.result.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn too_many_generators() {
        let hs = vec![pauli_z(); MAX_VERTEX_GENERATORS + 1];
        let c = Circuit::from_hamiltonians(hs).unwrap();
        let gens = conjugated_generators(&c).unwrap();
        assert!(matches!(h0_vertex_enum(&gens), Err(H0Error::TooManyGenerators { n: 21, .. })));
        let auto = h0_auto_with(&c, &gens);
        assert_eq!(auto.result.method, H0Method::TriangleUpper);
        assert!((auto.result.value - 21.0).abs() < 1e-12);
    }
}
