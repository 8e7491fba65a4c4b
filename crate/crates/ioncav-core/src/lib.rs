//! Numerical simulator for a single trapped ion coupled to one cavity
//! mode, at desk scale.
//!
//! The crate models the composite space (cavity ⊗ vibration ⊗ internal
//! qubit) on truncated Fock bases, builds the driven and effective
//! Hamiltonians of the system, evolves states by exponential action, and
//! runs the pulse-and-measure protocols that post-select two-mode
//! nonclassical states: SU(2) cats, entangled coherent pairs, squeezed
//! vacua and squeezed cats, plus a two-qubit phase gate on the lowest Fock
//! states of the two modes. Analytic constructors for every target state
//! double as oracles for the protocol outputs.

pub mod analysis;
pub mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod operators;
pub mod protocols;
pub mod space;
pub mod sparse;
pub mod targets;
pub mod tol;

pub use error::{Error, Result};
pub use evolution::{evolve, frame_transform, integrate_reference, EvolutionRequest, Evolved, Frame};
pub use hamiltonian::{build_effective, build_hamiltonian, EffectiveModel, Model, PhysicalParams};
pub use operators::{make_mode_operators, ModeOperators, Operator};
pub use protocols::{
    carrier_pi2_pulse, measure_internal, run_entangled_coherent, run_phase_gate, run_squeezed_cat,
    run_su2_cat, validate_rwa, BranchPair, GateTruthTable, PhaseGateRun, ProtocolOutcome,
    RunOptions, RwaReport,
};
pub use space::{HilbertSpec, Internal, StateVector, TwoModeState};
pub use targets::{CatState, EcsVariant, Parity};
