//! Inverse engineering of time-dependent qubit Hamiltonians.
//!
//! A target evolution operator is written in spectral form — an
//! instantaneous orthonormal basis plus a free eigenphase — and the
//! generating Hamiltonian is recovered from `H(t) = i U̇ U†`. The crate
//! covers:
//!
//! - [`schedule`]: the normalized-time interpolations driving the operator,
//! - [`spectral`]: the parameterized single- and two-qubit operators,
//! - [`synthesis`]: closed-form and numerical Hamiltonian extraction, plus
//!   gate presets (phase family, Hadamard, controlled-phase),
//! - [`propagator`]: time-ordered midpoint integration and gate fidelity,
//! - [`robustness`]: sensitivity of each protocol to a systematic amplitude
//!   error on the transverse drive, and schedule-comparison sweeps.

pub mod error;
pub mod pauli;
pub mod propagator;
pub mod quadrature;
pub mod robustness;
pub mod schedule;
pub mod spectral;
pub mod synthesis;

pub use error::{Error, Result};
pub use pauli::{C64, Mat2, Mat4, PauliDecomposition, TWO_QUBIT_LABELS};
pub use propagator::{
    gate_fidelity, propagate, propagate_perturbed, PerturbationSpec, UnitaryMatrix,
};
pub use robustness::{
    perpendicular_input, predicted_fidelity, robustness_sweep, sensitivity_case_one,
    sensitivity_case_one_closed, sensitivity_case_one_printed, sensitivity_case_two,
    sensitivity_general, SensitivityResult, SweepTable,
};
pub use schedule::{solve_cycloid_ratio, Schedule};
pub use spectral::{SingleQubitParams, State2, State4, TwoQubitParams};
pub use synthesis::{
    cz_hamiltonian, hadamard_hamiltonian, omega_closed_form, phase_gate_hamiltonian,
    synthesize_numeric2, synthesize_numeric4, TimeIndexedHamiltonian,
};
