//! Closed-form `max_{x∈[−1,1]} ‖A + xB‖₂` for a pair of 2×2 matrices.
//!
//! With `s(x) = tr((A+xB)†(A+xB)) = τ₀ + τ₁x + τ₂x²` and
//! `d(x) = |det(A+xB)|² = ω₀ + … + ω₄x⁴`, the squared singular values are
//! the roots `κ` of `κ² − s(x)κ + d(x) = 0`. Interior critical points of `κ`
//! solve `d′² − s′ s d′ + d s′² = Σ ζ_k x^k = 0`, where `κ = d′/s′`.

use serde::{Deserialize, Serialize};

use super::poly::{self, poly_real_roots_in_open_interval};
use super::{H0Error, H0Method, H0Result, H0Witness};
use crate::matcore::{Complex64, ComplexMatrix};

/// Points of `𝓒` this close to ±1 are treated as endpoints.
const BOUNDARY_MARGIN: f64 = 1e-9;
const DEGENERACY_REL: f64 = 1e-12;
const C_VALUE_REL: f64 = 1e-10;
const MIN_DENOMINATOR: f64 = 1e-12;
const MIN_RADICAND: f64 = -1e-12;
const RESIDUAL_REL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PencilOrder {
    /// `A + xB`
    AB,
    /// `xA + B`
    BA,
}

impl std::fmt::Display for PencilOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PencilOrder::AB => "(A,B)",
            PencilOrder::BA => "(B,A)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilBranch {
    /// Distinct singular values away from isolated points; the ζ route.
    Generic,
    /// `s² ≡ 4d`: both singular values coincide on the whole pencil (e.g. two
    /// traceless Hermitian matrices), so `κ = s/2` exactly and the critical
    /// point is the root of `s′`.
    Coincident,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    SmallDenominator,
    NegativeRadicand,
    CharacteristicResidual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RejectedPoint {
    pub x: f64,
    pub reason: RejectReason,
}

/// Invariants of one ordering of the pencil.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilInvariants {
    pub tau: [f64; 3],
    /// `μ₀, μ₁, μ₂` as `[re, im]`.
    pub mu: [[f64; 2]; 3],
    pub omega: [f64; 5],
    pub zeta: [f64; 7],
    /// Ascending coefficients of `s² − 4d`, whose zeros in `(−1,1)` form `𝓒`.
    pub c_coeffs: [f64; 5],
    /// `2ω₁τ₂³ − 2τ₁τ₂²ω₂ + (3/2)τ₂ω₃τ₁² − ω₄τ₁³`
    pub appc0: f64,
    pub appc0_ok: bool,
    pub c_set_empty: bool,
    /// Points of `𝓒` found inside the interval (a sample if `𝓒` is everything).
    pub c_points: Vec<f64>,
    pub branch: PencilBranch,
    /// Critical points kept for `Γ`.
    pub s_roots: Vec<f64>,
    pub rejected: Vec<RejectedPoint>,
    /// `Γ` for this ordering; 0 when no interior critical point survives.
    pub gamma: f64,
    pub gamma_at: Option<f64>,
}

impl PencilInvariants {
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        let tau0 = frob2(a);
        let tau1 = 2.0 * hs_inner(a, b);
        let tau2 = frob2(b);
        let mu0 = det2(a);
        let mu1 = a[(0, 0)] * b[(1, 1)] - b[(0, 1)] * a[(1, 0)] + b[(0, 0)] * a[(1, 1)] - a[(0, 1)] * b[(1, 0)];
        let mu2 = det2(b);
        let omega = [
            mu0.norm_sqr(),
            2.0 * (mu0.conj() * mu1).re,
            mu1.norm_sqr() + 2.0 * (mu0.conj() * mu2).re,
            2.0 * (mu1.conj() * mu2).re,
            mu2.norm_sqr(),
        ];
        let tau = [tau0, tau1, tau2];
        let appc0_terms = [
            2.0 * omega[1] * tau2.powi(3),
            -2.0 * tau1 * tau2 * tau2 * omega[2],
            1.5 * tau2 * omega[3] * tau1 * tau1,
            -omega[4] * tau1.powi(3),
        ];
        let appc0: f64 = appc0_terms.iter().sum();
        let appc0_scale: f64 = appc0_terms.iter().map(|t| t.abs()).sum();
        let appc0_ok = appc0_scale > 0.0 && appc0.abs() > DEGENERACY_REL * appc0_scale;
        let c_coeffs = [
            tau0 * tau0 - 4.0 * omega[0],
            2.0 * tau0 * tau1 - 4.0 * omega[1],
            tau1 * tau1 + 2.0 * tau0 * tau2 - 4.0 * omega[2],
            2.0 * tau1 * tau2 - 4.0 * omega[3],
            tau2 * tau2 - 4.0 * omega[4],
        ];
        let c_scale = (tau0 + tau1.abs() + tau2).powi(2);
        let coincident = tau2 > 0.0 && c_coeffs.iter().all(|c| c.abs() <= DEGENERACY_REL * c_scale);

        let mut inv = Self {
            tau,
            mu: [[mu0.re, mu0.im], [mu1.re, mu1.im], [mu2.re, mu2.im]],
            omega,
            zeta: zeta(&tau, &omega),
            c_coeffs,
            appc0,
            appc0_ok,
            c_set_empty: true,
            c_points: Vec::new(),
            branch: if coincident {
                PencilBranch::Coincident
            } else {
                PencilBranch::Generic
            },
            s_roots: Vec::new(),
            rejected: Vec::new(),
            gamma: 0.0,
            gamma_at: None,
        };
        inv.c_points = inv.find_c_points();
        inv.c_set_empty = inv.c_points.is_empty();
        let candidates = match inv.branch {
            PencilBranch::Coincident => {
                let x = -tau1 / (2.0 * tau2);
                if x > -1.0 && x < 1.0 {
                    vec![x]
                } else {
                    Vec::new()
                }
            }
            PencilBranch::Generic => poly_real_roots_in_open_interval(&inv.zeta, -1.0, 1.0).unwrap_or_default(),
        };
        for x in candidates {
            match inv.kappa_at(x) {
                Ok(kappa) => {
                    inv.s_roots.push(x);
                    let g = kappa.sqrt();
                    if inv.gamma_at.is_none() || g > inv.gamma {
                        inv.gamma = g;
                        inv.gamma_at = Some(x);
                    }
                }
                Err(reason) => inv.rejected.push(RejectedPoint { x, reason }),
            }
        }
        inv
    }

    pub fn s(&self, x: f64) -> f64 {
        poly::eval(&self.tau, x)
    }

    pub fn d(&self, x: f64) -> f64 {
        poly::eval(&self.omega, x)
    }

    /// `κ² − s(x)κ + d(x)`
    pub fn characteristic_residual(&self, x: f64, kappa: f64) -> f64 {
        kappa * kappa - self.s(x) * kappa + self.d(x)
    }

    /// Squared singular value at a critical point, `d′/s′` (or `s/2` when the
    /// singular values coincide).
    fn kappa_at(&self, x: f64) -> Result<f64, RejectReason> {
        let radicand = match self.branch {
            PencilBranch::Coincident => 0.5 * self.s(x),
            PencilBranch::Generic => {
                let den = poly::eval(&poly::derivative(&self.tau), x);
                if den.abs() < MIN_DENOMINATOR {
                    return Err(RejectReason::SmallDenominator);
                }
                poly::eval(&poly::derivative(&self.omega), x) / den
            }
        };
        if radicand < MIN_RADICAND {
            return Err(RejectReason::NegativeRadicand);
        }
        let kappa = radicand.max(0.0);
        let scale = self.s(x).powi(2).max(1.0);
        if self.characteristic_residual(x, kappa).abs() > RESIDUAL_REL * scale {
            return Err(RejectReason::CharacteristicResidual);
        }
        Ok(kappa)
    }

    /// Zeros of `s² − 4d` strictly inside the interval. The polynomial is the
    /// squared gap `(σ₁² − σ₂²)²`, so every zero is also a zero of its
    /// derivative.
    fn find_c_points(&self) -> Vec<f64> {
        let (lo, hi) = (-1.0 + BOUNDARY_MARGIN, 1.0 - BOUNDARY_MARGIN);
        let scale: f64 = self.c_coeffs.iter().map(|c| c.abs()).sum();
        if scale == 0.0 || self.branch == PencilBranch::Coincident {
            return vec![0.0];
        }
        // Isolating the double roots directly is only accurate to about
        // sqrt(machine epsilon); the derivative's simple roots are sharp.
        let dc = poly::derivative(&self.c_coeffs);
        poly_real_roots_in_open_interval(&dc, lo, hi)
            .unwrap_or_default()
            .into_iter()
            .filter(|&x| poly::eval(&self.c_coeffs, x).abs() <= C_VALUE_REL * scale)
            .collect()
    }

    fn admissible(&self) -> bool {
        self.branch == PencilBranch::Coincident || (self.appc0_ok && self.c_set_empty)
    }
}

fn zeta(tau: &[f64; 3], omega: &[f64; 5]) -> [f64; 7] {
    let [t0, t1, t2] = *tau;
    let [w0, w1, w2, w3, w4] = *omega;
    [
        -w1 * t0 * t1 + w0 * t1 * t1 + w1 * w1,
        -2.0 * t0 * t1 * w2 - 2.0 * t0 * w1 * t2 + 4.0 * w0 * t1 * t2 + 4.0 * w1 * w2,
        -3.0 * t0 * t1 * w3 - 4.0 * t0 * t2 * w2 - w2 * t1 * t1
            + w1 * t1 * t2
            + 4.0 * w0 * t2 * t2
            + 6.0 * w1 * w3
            + 4.0 * w2 * w2,
        -4.0 * t0 * t1 * w4 - 6.0 * t0 * t2 * w3 - 2.0 * w3 * t1 * t1 - 2.0 * w2 * t1 * t2
            + 2.0 * w1 * t2 * t2
            + 8.0 * w1 * w4
            + 12.0 * w2 * w3,
        -8.0 * t0 * t2 * w4 - 3.0 * w4 * t1 * t1 - 5.0 * w3 * t1 * t2 + 16.0 * w2 * w4 + 9.0 * w3 * w3,
        -8.0 * t1 * t2 * w4 - 2.0 * w3 * t2 * t2 + 24.0 * w3 * w4,
        -4.0 * t2 * t2 * w4 + 16.0 * w4 * w4,
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixCData {
    pub ab: PencilInvariants,
    pub ba: PencilInvariants,
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub gamma_ab: f64,
    pub gamma_ba: f64,
}

impl AppendixCData {
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        let ab = PencilInvariants::new(a, b);
        let ba = PencilInvariants::new(b, a);
        let (gamma_ab, gamma_ba) = (ab.gamma, ba.gamma);
        Self {
            norm_plus: norm2x2(&(a + b)),
            norm_minus: norm2x2(&(a - b)),
            ab,
            ba,
            gamma_ab,
            gamma_ba,
        }
    }

    /// `max{‖A+B‖₂, ‖A−B‖₂, Γ(A,B), Γ(B,A)}` with its witness, regardless
    /// of whether the preconditions hold.
    pub fn four_way_max(&self) -> (f64, H0Witness) {
        let mut best = (self.norm_plus, H0Witness::Pencil { x: 1.0, order: PencilOrder::AB });
        let mut consider = |v: f64, w: H0Witness| {
            if v > best.0 {
                best = (v, w);
            }
        };
        consider(self.norm_minus, H0Witness::Pencil { x: -1.0, order: PencilOrder::AB });
        if let Some(x) = self.ab.gamma_at {
            consider(self.gamma_ab, H0Witness::Pencil { x, order: PencilOrder::AB });
        }
        if let Some(x) = self.ba.gamma_at {
            consider(self.gamma_ba, H0Witness::Pencil { x, order: PencilOrder::BA });
        }
        best
    }

    fn ordering(&self, order: PencilOrder) -> &PencilInvariants {
        match order {
            PencilOrder::AB => &self.ab,
            PencilOrder::BA => &self.ba,
        }
    }
}

/// `h₀ = max_{‖λ‖_∞=1} ‖λ₁A + λ₂B‖₂` for 2×2 `A`, `B`.
///
/// Both orderings must satisfy the nondegeneracy condition and have an empty
/// `𝓒`, unless the singular values coincide identically.
pub fn h0_appendix_c(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(H0Result, AppendixCData), H0Error> {
    for m in [a, b] {
        if m.dim() != 2 {
            return Err(H0Error::NotTwoByTwo { dim: m.dim() });
        }
    }
    let data = AppendixCData::new(a, b);
    for order in [PencilOrder::AB, PencilOrder::BA] {
        let inv = data.ordering(order);
        if inv.admissible() {
            continue;
        }
        if !inv.appc0_ok {
            return Err(H0Error::DegenerateConfiguration {
                order,
                appc0: inv.appc0,
                data: Box::new(data),
            });
        }
        return Err(H0Error::ConditionCViolated {
            order,
            point: inv.c_points[0],
            data: Box::new(data),
        });
    }
    let (value, witness) = data.four_way_max();
    Ok((
        H0Result {
            value,
            method: H0Method::AppendixC,
            witness: Some(witness),
            is_upper_bound_only: false,
        },
        data,
    ))
}

fn frob2(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `Re tr(A†B)`
fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn det2(m: &ComplexMatrix) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Largest singular value of a 2×2 matrix.
///
/// After a global phase makes `det M` real and nonnegative,
/// `σ_max = (‖(a − d̄, b + c̄)‖ + ‖(a + d̄, b − c̄)‖)/2`. Unlike
/// `√((s + √(s² − 4|det|²))/2)` this keeps full precision when the two
/// singular values nearly coincide.
pub fn norm2x2(m: &ComplexMatrix) -> f64 {
    let det = det2(m);
    let phase = if det.norm() > 0.0 {
        (det / det.norm()).sqrt().conj()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let (a, b, c, d) = (m[(0, 0)] * phase, m[(0, 1)] * phase, m[(1, 0)] * phase, m[(1, 1)] * phase);
    let p = (a - d.conj()).norm().hypot((b + c.conj()).norm());
    let q = (a + d.conj()).norm().hypot((b - c.conj()).norm());
    0.5 * (p + q)
}
