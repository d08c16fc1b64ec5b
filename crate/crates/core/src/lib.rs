//! Certified fidelity floors for quantum circuits with coherent rotation-angle
//! errors.
//!
//! A circuit `[H_1, …, H_N]` prepares `ψ̂ = e^{-iH_1}⋯e^{-iH_N}ψ₀`. Each gate
//! may overshoot by a relative error, `e^{-i(1+ε_k)H_k}` with `|ε_k| ≤ ε̄`,
//! and [`bounds`] returns `M(ε̄)` with `|⟨ψ(ε), ψ̂⟩| ≥ 1 − M(ε̄)`.
//!
//! ```
//! use cohbound_core::{baseline_bound, h0_auto, theorem2_bound, Circuit, Gate};
//! use std::f64::consts::PI;
//!
//! let c = Circuit::new(vec![Gate::rz(PI / 4.0), Gate::ry(PI / 2.0)]).unwrap();
//! let h0 = h0_auto(&c).unwrap().result.value;
//! let t2 = theorem2_bound(&c, 0.2, 1e-12, h0).unwrap();
//! let base = baseline_bound(&c, 0.2).unwrap();
//! assert!(t2.fidelity_floor > base.fidelity_floor);
//! ```

pub mod bounds;
pub mod circuit;
pub mod h0solver;
pub mod matcore;
pub mod verify;

pub use bounds::{
    baseline_bound, conjugated_generators, epsilon_max, epsilon_max_with_h0, eta_table, eta_table_with_order,
    theorem1_bound, theorem2_bound, BoundMethod, BoundReport, BoundsError, ConjugatedGenerators, Crossover, EtaTable,
};
pub use circuit::{
    effective_hamiltonian, effective_hamiltonian_multi, fidelity, ideal_state, perturbed_state, Circuit, CircuitError,
    Gate, Perturbation, PerturbationMode, PerturbationSpec, StateVector,
};
pub use h0solver::{
    h0_appendix_c, h0_auto, h0_triangle_upper, h0_vertex_enum, poly_real_roots_in_open_interval, AppendixCData,
    H0Error, H0Method, H0Result, H0Selection, H0Witness,
};
pub use matcore::{Complex64, ComplexMatrix, HermitianMatrix, MatError, UnitaryMatrix};
pub use verify::{
    appendix_a_check, appendix_b_check, monte_carlo_check, ode_crosscheck, VerificationConfig, VerificationReport,
    VerifyError,
};
