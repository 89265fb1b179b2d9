//! Simulation library for transferring a one-qubit atomic state into a
//! single-mode optical field encoded in quasi-orthogonal coherent states.
//!
//! The library has three layers:
//!
//! - [`hilbert`]: truncated single-mode Fock space: state vectors, ladder
//!   and number operators, coherent states, inner products.
//! - [`atomfield`]: composite atom⊗field states, the effective degenerate
//!   Raman Hamiltonian, the full three-level Λ Hamiltonian, and analytic /
//!   numeric time evolution.
//! - [`protocol`]: the end-to-end transfer: regime check, evolution to the
//!   swap time, atomic measurement, cat-basis Hadamard and NOT gates,
//!   fidelity scoring.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to call from parallel sweep
//! workers without synchronization.

pub mod atomfield;
pub mod error;
pub mod hilbert;
pub mod protocol;

pub use atomfield::{
    build_effective_hamiltonian, build_full_hamiltonian, evolve_analytic, evolve_numeric,
    f_population_ceiling, AtomQubit, JointState, PhysicalParams, Propagator, ThreeLevelAtom,
};
pub use error::Error;
pub use hilbert::{
    coherent_amplitudes, inner_product, ladder_operators, DenseOperator, FockVector,
    TruncationConfig,
};
pub use protocol::{
    check_regime, hadamard_alpha, not_alpha, project_atom, run_protocol, run_protocol_at,
    AtomLevel, CatBasis, MeasurementOutcome, OutcomeRule, ProtocolResult, RegimeReport,
};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
