//! Numerical tolerances used across the crate. Values are pinned here so
//! tests, protocol checks and the CLI `--check` mode agree on one source.

/// ‖H − H†‖_max allowed for an operator to count as Hermitian.
/// Construction noise only; builders assemble Hermitian terms exactly.
pub const HERMITICITY_MAX: f64 = 1e-12;

/// Default relative tolerance of the exponential-action evolver.
pub const EVOLVE_DEFAULT: f64 = 1e-12;

/// Allowed norm drift |‖ψ‖ − 1| per evolution.
pub const EVOLVE_NORM_DRIFT: f64 = 1e-10;

/// Fidelity defect allowed between the evolver and the fixed-step
/// reference integrator on small instances.
pub const ORACLE_AGREEMENT: f64 = 1e-8;

/// Unit-norm defect after an explicit `normalize`.
pub const NORM_AFTER_NORMALIZE: f64 = 1e-12;

/// Probability mass allowed in the guard levels of either mode; states
/// exceeding this are under-truncated.
pub const TRUNCATION_BUDGET: f64 = 1e-10;

/// Measurement branches below this probability are reported as empty.
pub const EMPTY_BRANCH_PROB: f64 = 1e-14;

/// Squared norm below which a cat superposition counts as exactly cancelled.
pub const DEGENERATE_NORM_SQ: f64 = 1e-14;

/// |P(g) + P(e) − 1| allowed per protocol run.
pub const PROB_SUM: f64 = 1e-10;

/// Fidelity defect of protocol branches vs their analytic targets.
pub const SU2_CAT_FIDELITY: f64 = 1e-9;
pub const ENTANGLED_COHERENT_FIDELITY: f64 = 1e-6;
pub const SQUEEZED_CAT_FIDELITY: f64 = 1e-7;

/// Per-element error of the phase-gate truth table vs diag(1, 1, 1, −1),
/// and the allowed off-diagonal leakage.
pub const PHASE_GATE_ELEMENT: f64 = 1e-9;

/// |⟨Φ₊|Φ₋⟩| allowed between opposite-parity cat branches.
pub const CAT_ORTHOGONALITY: f64 = 1e-10;

/// Per-entry error of the squeezed-vacuum diagonal distribution.
pub const SQUEEZED_DIAGONAL_ENTRY: f64 = 1e-8;

/// Probability mass allowed off the even/odd diagonal support of a
/// squeezed cat branch.
pub const OFF_SUPPORT_MASS: f64 = 1e-12;

/// Singular values below this are dropped from entropy sums.
pub const SCHMIDT_SV_FLOOR: f64 = 1e-12;
