//! The four pulse-and-measure protocols, end to end: prepare the internal
//! superposition, evolve under an effective interaction, apply the carrier
//! π/2 pulse and project on the detected internal state.
//!
//! Both detection branches are always computed; the schemes are
//! post-selective and deterministic branch enumeration keeps tests exact.

use num_complex::Complex64 as C64;

use crate::analysis;
use crate::error::{Error, Result};
use crate::evolution::{evolve, frame_transform, EvolutionRequest, Frame};
use crate::hamiltonian::{build_hamiltonian, build_effective, EffectiveModel, Model, PhysicalParams};
use crate::space::{HilbertSpec, Internal, StateVector, TwoModeState};
use crate::targets::{self, CatState, EcsVariant, Parity};
use crate::tol;

/// One detection branch of a protocol run. `post_state` and
/// `target_fidelity` are absent when the branch carries no probability.
#[derive(Clone, Debug)]
pub struct ProtocolOutcome {
    pub branch: Internal,
    pub probability: f64,
    pub post_state: Option<TwoModeState>,
    pub target_fidelity: Option<f64>,
    pub diagnostics: OutcomeDiagnostics,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OutcomeDiagnostics {
    /// Guard-level mass of the post-measurement state.
    pub truncation_mass: f64,
    /// Norm of the post state after renormalization.
    pub post_norm: f64,
}

/// Outcomes of both detection branches of one protocol run.
#[derive(Clone, Debug)]
pub struct BranchPair {
    pub g: ProtocolOutcome,
    pub e: ProtocolOutcome,
}

impl BranchPair {
    pub fn probability_sum(&self) -> f64 {
        self.g.probability + self.e.probability
    }

    pub fn outcome(&self, branch: Internal) -> &ProtocolOutcome {
        match branch {
            Internal::G => &self.g,
            Internal::E => &self.e,
        }
    }
}

/// Carrier π/2 pulse on the internal state, identity on the modes:
/// |e⟩ → (|g⟩+|e⟩)/√2 and |g⟩ → (|g⟩−|e⟩)/√2.
pub fn carrier_pi2_pulse(state: &StateVector) -> StateVector {
    let spec = state.spec();
    let mut out = StateVector::zero(spec);
    let sqrt2_inv = 1.0 / 2.0_f64.sqrt();
    for n_a in 0..spec.cutoff_a() {
        for n_b in 0..spec.cutoff_b() {
            let ig = spec.index_of(n_a, n_b, Internal::G);
            let ie = spec.index_of(n_a, n_b, Internal::E);
            let (cg, ce) = (state.amplitudes()[ig], state.amplitudes()[ie]);
            out.amplitudes_mut()[ig] = (cg + ce) * sqrt2_inv;
            out.amplitudes_mut()[ie] = (ce - cg) * sqrt2_inv;
        }
    }
    out
}

/// Project on the detected internal state. Returns the branch probability
/// and the renormalized two-mode state left behind.
pub fn measure_internal(state: &StateVector, branch: Internal) -> Result<(f64, TwoModeState)> {
    let spec = state.spec();
    let mut post = TwoModeState::zero(spec.cutoff_a(), spec.cutoff_b());
    let mut probability = 0.0;
    for n_a in 0..spec.cutoff_a() {
        for n_b in 0..spec.cutoff_b() {
            let amp = state.amplitudes()[spec.index_of(n_a, n_b, branch)];
            probability += amp.norm_sqr();
            let idx = post.index_of(n_a, n_b);
            post.amplitudes_mut()[idx] = amp;
        }
    }
    if probability < tol::EMPTY_BRANCH_PROB {
        return Err(Error::EmptyBranch { prob: probability });
    }
    post.normalize()?;
    Ok((probability, post))
}

/// (|g⟩ + |e⟩)/√2 ⊗ ψ over the composite space.
pub fn superposed_input(two_mode: &TwoModeState) -> Result<StateVector> {
    let mut input = two_mode.embed(Internal::G)?;
    input.add_scaled(&two_mode.embed(Internal::E)?, C64::new(1.0, 0.0))?;
    input.scale(C64::new(1.0 / 2.0_f64.sqrt(), 0.0));
    Ok(input)
}

/// Knobs shared by the protocol runners.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Relative tolerance handed to the exponential-action evolver.
    pub tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tolerance: tol::EVOLVE_DEFAULT }
    }
}

/// Evolve under an effective interaction of unit strength for `theta`,
/// then apply the carrier π/2 pulse. The measurement step is left to the
/// caller, which keeps this map linear in the input.
pub fn pulse_sequence(
    input: &StateVector,
    model: EffectiveModel,
    theta: f64,
) -> Result<StateVector> {
    pulse_sequence_opts(input, model, theta, &RunOptions::default())
}

pub fn pulse_sequence_opts(
    input: &StateVector,
    model: EffectiveModel,
    theta: f64,
    opts: &RunOptions,
) -> Result<StateVector> {
    let h = build_effective(input.spec(), model, 1.0)?;
    let evolved = evolve(&EvolutionRequest::new(&h, input, theta).with_tolerance(opts.tolerance))?;
    Ok(carrier_pi2_pulse(&evolved.state))
}

fn branch_outcome(
    state: &StateVector,
    branch: Internal,
    target: Option<&CatState>,
) -> Result<ProtocolOutcome> {
    match measure_internal(state, branch) {
        Ok((probability, post)) => {
            let guard = 2.min(post.cutoff_a().min(post.cutoff_b()) - 1).max(1);
            let truncation_mass = analysis::truncation_mass(&post, guard)?;
            let target_fidelity = match target {
                Some(cat) => Some(analysis::fidelity_two_mode(&post, &cat.state)?.fidelity),
                None => None,
            };
            Ok(ProtocolOutcome {
                branch,
                probability,
                diagnostics: OutcomeDiagnostics { truncation_mass, post_norm: post.norm() },
                post_state: Some(post),
                target_fidelity,
            })
        }
        Err(Error::EmptyBranch { prob }) => Ok(ProtocolOutcome {
            branch,
            probability: prob,
            post_state: None,
            target_fidelity: None,
            diagnostics: OutcomeDiagnostics::default(),
        }),
        Err(other) => Err(other),
    }
}

fn cat_target(result: Result<CatState>) -> Result<Option<CatState>> {
    match result {
        Ok(cat) => Ok(Some(cat)),
        Err(Error::DegenerateState(_)) => Ok(None),
        Err(other) => Err(other),
    }
}

/// Beam-splitter cat protocol: start from |0⟩_a |n⟩_b, evolve for
/// Ω₁t = theta, pulse and detect. The g branch aims at the even cat,
/// the e branch at the odd one.
pub fn run_su2_cat(spec: HilbertSpec, n: usize, theta: f64) -> Result<BranchPair> {
    run_su2_cat_opts(spec, n, theta, &RunOptions::default())
}

pub fn run_su2_cat_opts(
    spec: HilbertSpec,
    n: usize,
    theta: f64,
    opts: &RunOptions,
) -> Result<BranchPair> {
    let seed = TwoModeState::fock(spec.cutoff_a(), spec.cutoff_b(), 0, n)?;
    let input = superposed_input(&seed)?;
    let after = pulse_sequence_opts(&input, EffectiveModel::BeamSplitter, theta, opts)?;
    let target_plus = cat_target(targets::su2_cat(spec, theta, n, Parity::Plus))?;
    let target_minus = cat_target(targets::su2_cat(spec, theta, n, Parity::Minus))?;
    Ok(BranchPair {
        g: branch_outcome(&after, Internal::G, target_plus.as_ref())?,
        e: branch_outcome(&after, Internal::E, target_minus.as_ref())?,
    })
}

/// Entangled-coherent protocol: start from |α⟩_a |β⟩_b and evolve for
/// Ω₁t = π/4 (half angle) or π/2 (full swap) before pulsing and detecting.
pub fn run_entangled_coherent(
    spec: HilbertSpec,
    alpha: C64,
    beta: C64,
    variant: EcsVariant,
) -> Result<BranchPair> {
    run_entangled_coherent_opts(spec, alpha, beta, variant, &RunOptions::default())
}

pub fn run_entangled_coherent_opts(
    spec: HilbertSpec,
    alpha: C64,
    beta: C64,
    variant: EcsVariant,
    opts: &RunOptions,
) -> Result<BranchPair> {
    let seed = targets::coherent_product(spec, alpha, beta)?;
    let input = superposed_input(&seed)?;
    let theta = match variant {
        EcsVariant::HalfAngle => std::f64::consts::FRAC_PI_4,
        EcsVariant::FullSwap => std::f64::consts::FRAC_PI_2,
    };
    let after = pulse_sequence_opts(&input, EffectiveModel::BeamSplitter, theta, opts)?;
    let plus = cat_target(targets::entangled_coherent_pair(spec, alpha, beta, variant, Parity::Plus))?;
    let minus =
        cat_target(targets::entangled_coherent_pair(spec, alpha, beta, variant, Parity::Minus))?;
    Ok(BranchPair {
        g: branch_outcome(&after, Internal::G, plus.as_ref())?,
        e: branch_outcome(&after, Internal::E, minus.as_ref())?,
    })
}

/// Squeezed-cat protocol: start from double vacuum, evolve under the
/// parametric interaction for Ω₂t = r, pulse and detect. The g branch is
/// supported on the even diagonal, the e branch on the odd one.
pub fn run_squeezed_cat(spec: HilbertSpec, r: f64) -> Result<BranchPair> {
    run_squeezed_cat_opts(spec, r, &RunOptions::default())
}

pub fn run_squeezed_cat_opts(spec: HilbertSpec, r: f64, opts: &RunOptions) -> Result<BranchPair> {
    // fail early when the squeeze outgrows the cutoffs
    let required = targets::squeeze_required_cutoff(r)?;
    let support = spec.cutoff_a().min(spec.cutoff_b());
    if required > support {
        return Err(Error::TruncationBudget { required, have: support });
    }
    let seed = TwoModeState::fock(spec.cutoff_a(), spec.cutoff_b(), 0, 0)?;
    let input = superposed_input(&seed)?;
    let after = pulse_sequence_opts(&input, EffectiveModel::Squeeze, r, opts)?;
    let plus = cat_target(targets::squeezed_cat(spec, r, Parity::Plus))?;
    let minus = cat_target(targets::squeezed_cat(spec, r, Parity::Minus))?;
    Ok(BranchPair {
        g: branch_outcome(&after, Internal::G, plus.as_ref())?,
        e: branch_outcome(&after, Internal::E, minus.as_ref())?,
    })
}

/// Truth table of the two-qubit gate over {|0,0⟩, |0,1⟩, |1,0⟩, |1,1⟩}
/// (cavity qubit first), internal state fixed to |g⟩.
#[derive(Clone, Debug)]
pub struct GateTruthTable {
    pub matrix: [[C64; 4]; 4],
}

impl GateTruthTable {
    /// Max |T − diag(1, 1, 1, −1)| element.
    pub fn max_error_vs_phase_gate(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let want = if i == j {
                    C64::new(if i == 3 { -1.0 } else { 1.0 }, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                worst = worst.max((v - want).norm());
            }
        }
        worst
    }

    pub fn off_diagonal_max(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }

    /// Max |T†T − 1| element.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.matrix[k][i].conj() * self.matrix[k][j];
                }
                let want = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((acc - want).norm());
            }
        }
        worst
    }
}

/// Result of one phase-gate run: the measured truth table, the evolved
/// input coefficients, and the population that leaked out of the
/// computational subspace.
#[derive(Clone, Debug)]
pub struct PhaseGateRun {
    pub truth_table: GateTruthTable,
    pub input: [C64; 4],
    pub evolved: [C64; 4],
    pub leakage: f64,
}

const GATE_BASIS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Apply the phase-gate interaction for Ω₃t = π to the four computational
/// basis states and to an arbitrary superposition of them.
pub fn run_phase_gate(spec: HilbertSpec, input: &[C64; 4]) -> Result<PhaseGateRun> {
    run_phase_gate_opts(spec, input, &RunOptions::default())
}

pub fn run_phase_gate_opts(
    spec: HilbertSpec,
    input: &[C64; 4],
    opts: &RunOptions,
) -> Result<PhaseGateRun> {
    let norm: f64 = input.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::InvalidArgument("phase gate input must be nonzero".into()));
    }
    let h = build_effective(spec, EffectiveModel::PhaseGate, 1.0)?;
    let t = std::f64::consts::PI;

    let mut matrix = [[C64::new(0.0, 0.0); 4]; 4];
    for (col, &(n_a, n_b)) in GATE_BASIS.iter().enumerate() {
        let seed = StateVector::fock(spec, n_a, n_b, Internal::G)?;
        let out = evolve(&EvolutionRequest::new(&h, &seed, t).with_tolerance(opts.tolerance))?;
        for (row, &(m_a, m_b)) in GATE_BASIS.iter().enumerate() {
            matrix[row][col] = out.state.amplitudes()[spec.index_of(m_a, m_b, Internal::G)];
        }
    }

    let mut seed = StateVector::zero(spec);
    for (k, &(n_a, n_b)) in GATE_BASIS.iter().enumerate() {
        let idx = spec.index_of(n_a, n_b, Internal::G);
        seed.amplitudes_mut()[idx] = input[k] / C64::new(norm, 0.0);
    }
    let out = evolve(&EvolutionRequest::new(&h, &seed, t).with_tolerance(opts.tolerance))?;
    let mut evolved = [C64::new(0.0, 0.0); 4];
    let mut kept = 0.0;
    for (k, &(n_a, n_b)) in GATE_BASIS.iter().enumerate() {
        let amp = out.state.amplitudes()[spec.index_of(n_a, n_b, Internal::G)];
        evolved[k] = amp;
        kept += amp.norm_sqr();
    }

    Ok(PhaseGateRun {
        truth_table: GateTruthTable { matrix },
        input: *input,
        evolved,
        leakage: (1.0 - kept).max(0.0),
    })
}

/// Result of one rotating-wave-approximation check.
#[derive(Clone, Copy, Debug)]
pub struct RwaReport {
    pub fidelity: f64,
    pub ratio: f64,
    pub theta: f64,
    pub params: PhysicalParams,
}

/// Lamb-Dicke parameter used to realize a unit-strength beam splitter in
/// the RWA validator; also sets the residual quadratic shift at η·Ω₁.
pub const RWA_ETA: f64 = 0.05;

fn rwa_params(ratio: f64) -> Result<PhysicalParams> {
    if !(ratio > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "frequency ratio must exceed 1, got {ratio}"
        )));
    }
    let nu = ratio;
    let delta_oa = 100.0 * nu;
    let drive = (delta_oa / RWA_ETA).sqrt();
    // g₀ = ε makes Ω₁ = g₀εη/Δ equal to one
    PhysicalParams::with_default_phase(nu, nu, delta_oa, drive, drive, RWA_ETA)
}

/// Fidelity between evolution under the adiabatically eliminated
/// Hamiltonian (free terms, quadratic shift and the full cross-mode drive)
/// and the rotating-wave beam splitter re-dressed with the free-oscillation
/// frame, for an arbitrary composite input.
pub fn rwa_fidelity(input: &StateVector, ratio: f64, theta: f64) -> Result<RwaReport> {
    let spec = input.spec();
    let params = rwa_params(ratio)?;
    let omega1 = params.omega1();

    let eliminated = build_hamiltonian(spec, &params, Model::Eliminated)?;
    let t = theta / omega1;
    let exact = evolve(&EvolutionRequest::new(&eliminated, input, t))?;

    let beam_splitter = build_effective(spec, EffectiveModel::BeamSplitter, omega1)?;
    let rwa = evolve(&EvolutionRequest::new(&beam_splitter, input, t))?;
    let dressed = frame_transform(
        &rwa.state,
        t,
        Frame::FreeOscillation { nu: params.nu, delta_ca: params.delta_ca },
    );

    let fidelity = analysis::fidelity(&exact.state, &dressed)?.fidelity;
    Ok(RwaReport { fidelity, ratio, theta, params })
}

/// RWA check on the protocol's own initial state
/// (|g⟩+|e⟩)/√2 ⊗ |α⟩_a |β⟩_b.
pub fn validate_rwa(
    spec: HilbertSpec,
    alpha: C64,
    beta: C64,
    ratio: f64,
    theta: f64,
) -> Result<RwaReport> {
    let seed = targets::coherent_product(spec, alpha, beta)?;
    let input = superposed_input(&seed)?;
    rwa_fidelity(&input, ratio, theta)
}

/// Exploratory overlap between the driven ion-cavity model and its
/// adiabatically eliminated form after the same interaction window. The
/// frame correction removes the dressed qubit phase to second order in
/// the drive, exp[+i(Δ + 2ε²/Δ) σ₊σ₋ t]; residual dressing and
/// non-adiabatic transfer stay in, so this is a diagnostic number, not a
/// thresholded check.
pub fn full_vs_eliminated_overlap(input: &StateVector, ratio: f64, theta: f64) -> Result<f64> {
    let spec = input.spec();
    let params = rwa_params(ratio)?;
    let t = theta / params.omega1();

    let full = build_hamiltonian(spec, &params, Model::Full)?;
    let eliminated = build_hamiltonian(spec, &params, Model::Eliminated)?;
    let full_out = evolve(&EvolutionRequest::new(&full, input, t))?;
    let elim_out = evolve(&EvolutionRequest::new(&eliminated, input, t))?;

    let mut undressed = full_out.state.clone();
    let shift = params.delta_oa + 2.0 * params.epsilon_a.powi(2) / params.delta_oa;
    let phase = C64::from_polar(1.0, shift * t);
    for (i, a) in undressed.amplitudes_mut().iter_mut().enumerate() {
        let (_, _, s) = spec.unpack(i);
        if s == Internal::E {
            *a *= phase;
        }
    }
    Ok(analysis::fidelity(&elim_out.state, &undressed)?.fidelity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pi2_pulse_on_basis_states() {
        let spec = HilbertSpec::new(3, 3).unwrap();
        let e = StateVector::fock(spec, 0, 0, Internal::E).unwrap();
        let out = carrier_pi2_pulse(&e);
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((out.amplitudes()[spec.index_of(0, 0, Internal::G)] - c(s, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[spec.index_of(0, 0, Internal::E)] - c(s, 0.0)).norm() < 1e-15);

        let g = StateVector::fock(spec, 0, 0, Internal::G).unwrap();
        let out = carrier_pi2_pulse(&g);
        assert!((out.amplitudes()[spec.index_of(0, 0, Internal::G)] - c(s, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[spec.index_of(0, 0, Internal::E)] - c(-s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pi2_pulse_twice_is_a_pi_rotation() {
        // U²|e⟩ = |g⟩ and U²|g⟩ = −|e⟩
        let spec = HilbertSpec::new(3, 3).unwrap();
        let e = StateVector::fock(spec, 1, 2, Internal::E).unwrap();
        let twice = carrier_pi2_pulse(&carrier_pi2_pulse(&e));
        let g_ref = StateVector::fock(spec, 1, 2, Internal::G).unwrap();
        assert!((twice.inner(&g_ref).unwrap() - c(1.0, 0.0)).norm() < 1e-14);

        let g = StateVector::fock(spec, 1, 2, Internal::G).unwrap();
        let twice = carrier_pi2_pulse(&carrier_pi2_pulse(&g));
        let e_ref = StateVector::fock(spec, 1, 2, Internal::E).unwrap();
        assert!((twice.inner(&e_ref).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pi2_pulse_preserves_norm() {
        let spec = HilbertSpec::new(4, 4).unwrap();
        let mut v = StateVector::fock(spec, 1, 0, Internal::E).unwrap();
        v.add_scaled(&StateVector::fock(spec, 0, 2, Internal::G).unwrap(), c(0.3, -0.4)).unwrap();
        let n0 = v.norm();
        assert!((carrier_pi2_pulse(&v).norm() - n0).abs() < 1e-14);
    }

    #[test]
    fn measure_equal_superposition() {
        let spec = HilbertSpec::new(3, 3).unwrap();
        let mut v = StateVector::fock(spec, 0, 0, Internal::G).unwrap();
        v.add_scaled(&StateVector::fock(spec, 0, 0, Internal::E).unwrap(), c(1.0, 0.0)).unwrap();
        v.scale(c(1.0 / 2.0_f64.sqrt(), 0.0));
        let (p, post) = measure_internal(&v, Internal::G).unwrap();
        assert!((p - 0.5).abs() < 1e-14);
        assert!((post.amplitude(0, 0) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn measure_empty_branch_errors() {
        let spec = HilbertSpec::new(3, 3).unwrap();
        let v = StateVector::fock(spec, 0, 1, Internal::E).unwrap();
        assert!(matches!(measure_internal(&v, Internal::G), Err(Error::EmptyBranch { .. })));
    }

    #[test]
    fn measure_probabilities_complete() {
        let seed = TwoModeState::fock(4, 4, 0, 1).unwrap();
        let input = superposed_input(&seed).unwrap();
        let after = pulse_sequence(&input, EffectiveModel::BeamSplitter, 0.9).unwrap();
        let (pg, _) = measure_internal(&after, Internal::G).unwrap();
        let (pe, _) = measure_internal(&after, Internal::E).unwrap();
        assert!((pg + pe - 1.0).abs() < 1e-10);
    }

    #[test]
    fn su2_cat_protocol_at_zero_angle() {
        let spec = HilbertSpec::new(5, 5).unwrap();
        let pair = run_su2_cat(spec, 2, 0.0).unwrap();
        assert!((pair.g.probability - 1.0).abs() < 1e-12);
        assert!(pair.e.probability < 1e-14);
        assert!(pair.e.post_state.is_none());
        let post = pair.g.post_state.as_ref().unwrap();
        assert!((post.amplitude(0, 2).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn su2_cat_protocol_matches_targets() {
        let spec = HilbertSpec::new(8, 8).unwrap();
        let pair = run_su2_cat(spec, 1, FRAC_PI_4).unwrap();
        assert!(pair.g.target_fidelity.unwrap() >= 1.0 - tol::SU2_CAT_FIDELITY);
        assert!(pair.e.target_fidelity.unwrap() >= 1.0 - tol::SU2_CAT_FIDELITY);
        // probabilities are the cat norms over four
        let plus = targets::su2_cat(spec, FRAC_PI_4, 1, Parity::Plus).unwrap();
        assert!((pair.g.probability - plus.unnormalized_norm_sq / 4.0).abs() < 1e-12);
        assert!((pair.probability_sum() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn su2_cat_probability_closed_form() {
        // P(g) = (2 + 2 Re⟨0,n|e^{2G}|0,n⟩)/4 = (1 + cosⁿ(2θ))/2, since the
        // |0,n⟩ component of the rotated state is cosⁿ of the full angle
        let spec = HilbertSpec::new(10, 10).unwrap();
        for (n, theta) in [(1usize, FRAC_PI_4), (2, 0.3), (5, 0.7)] {
            let pair = run_su2_cat(spec, n, theta).unwrap();
            let expected = (1.0 + (2.0 * theta).cos().powi(n as i32)) / 2.0;
            assert!(
                (pair.g.probability - expected).abs() < 1e-12,
                "n = {n}, theta = {theta}: P(g) = {}, expected {expected}",
                pair.g.probability
            );
        }
    }

    #[test]
    fn entangled_coherent_protocol_trivial_input() {
        let spec = HilbertSpec::new(8, 8).unwrap();
        let pair =
            run_entangled_coherent(spec, c(0.0, 0.0), c(0.0, 0.0), EcsVariant::HalfAngle).unwrap();
        assert!((pair.g.probability - 1.0).abs() < 1e-12);
        let post = pair.g.post_state.as_ref().unwrap();
        assert!((post.amplitude(0, 0).norm() - 1.0).abs() < 1e-12);
        assert!(pair.e.post_state.is_none());
    }

    #[test]
    fn entangled_coherent_protocol_matches_targets() {
        let spec = HilbertSpec::new(25, 25).unwrap();
        for variant in [EcsVariant::HalfAngle, EcsVariant::FullSwap] {
            let pair = run_entangled_coherent(spec, c(0.8, 0.0), c(0.0, 0.4), variant).unwrap();
            for outcome in [&pair.g, &pair.e] {
                assert!(
                    outcome.target_fidelity.unwrap() >= 1.0 - tol::ENTANGLED_COHERENT_FIDELITY,
                    "{variant:?} branch {:?}: fidelity {:?}",
                    outcome.branch,
                    outcome.target_fidelity
                );
            }
            assert!((pair.probability_sum() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn squeezed_cat_protocol_structure() {
        let spec = HilbertSpec::new(40, 40).unwrap();
        let r: f64 = 0.5;
        let pair = run_squeezed_cat(spec, r).unwrap();
        assert!(pair.g.target_fidelity.unwrap() >= 1.0 - tol::SQUEEZED_CAT_FIDELITY);
        assert!(pair.e.target_fidelity.unwrap() >= 1.0 - tol::SQUEEZED_CAT_FIDELITY);
        // P(g) − P(e) = 1/cosh(2r)
        assert!(
            (pair.g.probability - pair.e.probability - 1.0 / (2.0 * r).cosh()).abs() < 1e-10
        );
        // even/odd diagonal support
        let g_post = pair.g.post_state.as_ref().unwrap();
        let e_post = pair.e.post_state.as_ref().unwrap();
        for n in 0..40usize {
            if n % 2 == 0 {
                assert!(e_post.amplitude(n, n).norm_sqr() < 1e-12);
            } else {
                assert!(g_post.amplitude(n, n).norm_sqr() < 1e-12);
            }
        }
    }

    #[test]
    fn squeezed_cat_protocol_trivial() {
        let spec = HilbertSpec::new(8, 8).unwrap();
        let pair = run_squeezed_cat(spec, 0.0).unwrap();
        assert!((pair.g.probability - 1.0).abs() < 1e-12);
        assert!(pair.e.post_state.is_none());
    }

    #[test]
    fn phase_gate_truth_table() {
        let spec = HilbertSpec::new(2, 2).unwrap();
        let input = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let run = run_phase_gate(spec, &input).unwrap();
        assert!(run.truth_table.max_error_vs_phase_gate() < tol::PHASE_GATE_ELEMENT);
        assert!(run.truth_table.off_diagonal_max() < tol::PHASE_GATE_ELEMENT);
        assert!(run.truth_table.unitarity_defect() < 1e-9);
    }

    #[test]
    fn phase_gate_acts_linearly_on_superpositions() {
        // (|0,0⟩ + |1,1⟩)/√2 → (|0,0⟩ − |1,1⟩)/√2
        let spec = HilbertSpec::new(3, 3).unwrap();
        let w = 1.0 / 2.0_f64.sqrt();
        let input = [c(w, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(w, 0.0)];
        let run = run_phase_gate(spec, &input).unwrap();
        assert!((run.evolved[0] - c(w, 0.0)).norm() < 1e-10);
        assert!((run.evolved[3] - c(-w, 0.0)).norm() < 1e-10);
        assert!(run.leakage < 1e-12);
    }

    #[test]
    fn phase_gate_half_time_transfers_population() {
        // at Ω₃t = π/2 the |1,1,g⟩ population sits fully in |0,0,e⟩
        let spec = HilbertSpec::new(3, 3).unwrap();
        let h = build_effective(spec, EffectiveModel::PhaseGate, 1.0).unwrap();
        let seed = StateVector::fock(spec, 1, 1, Internal::G).unwrap();
        let out = evolve(&EvolutionRequest::new(&h, &seed, FRAC_PI_2)).unwrap();
        let p = out.state.amplitudes()[spec.index_of(0, 0, Internal::E)].norm_sqr();
        assert!((p - 1.0).abs() < 1e-11);
    }

    #[test]
    fn pipeline_is_linear_before_measurement() {
        let x = superposed_input(&TwoModeState::fock(6, 6, 0, 1).unwrap()).unwrap();
        let y = superposed_input(&TwoModeState::fock(6, 6, 0, 3).unwrap()).unwrap();
        let (cx, cy) = (c(0.6, 0.1), c(-0.3, 0.7));
        let mut combined = x.clone();
        combined.scale(cx);
        combined.add_scaled(&y, cy).unwrap();

        let theta = 0.8;
        let out_combined =
            pulse_sequence(&combined, EffectiveModel::BeamSplitter, theta).unwrap();
        let out_x = pulse_sequence(&x, EffectiveModel::BeamSplitter, theta).unwrap();
        let out_y = pulse_sequence(&y, EffectiveModel::BeamSplitter, theta).unwrap();
        let mut recombined = out_x.clone();
        recombined.scale(cx);
        recombined.add_scaled(&out_y, cy).unwrap();

        let diff: f64 = out_combined
            .amplitudes()
            .iter()
            .zip(recombined.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-10);
    }

    #[test]
    fn rwa_fidelity_improves_with_detuning() {
        let input = superposed_input(&TwoModeState::fock(6, 6, 0, 1).unwrap()).unwrap();
        let low = rwa_fidelity(&input, 10.0, FRAC_PI_4).unwrap();
        let high = rwa_fidelity(&input, 30.0, FRAC_PI_4).unwrap();
        assert!(low.fidelity < high.fidelity, "{} !< {}", low.fidelity, high.fidelity);
        assert!(high.fidelity <= 1.0 + 1e-12);
        assert!(low.fidelity > 0.9);
    }

    #[test]
    fn rwa_requires_ratio_above_one() {
        let spec = HilbertSpec::new(4, 4).unwrap();
        assert!(validate_rwa(spec, c(0.0, 0.0), c(0.0, 0.0), 0.5, 0.3).is_err());
    }
}
