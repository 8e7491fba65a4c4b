//! Unitary time evolution ψ(t) = exp(−iHt) ψ(0).
//!
//! [`evolve`] applies the matrix exponential through a scaled Taylor
//! action: the generator is split into segments of unit norm and each
//! segment's series is summed to the requested tolerance. A diagonal shift
//! by the mean of the spectrum keeps segment counts low for Hamiltonians
//! dominated by free oscillation terms.
//!
//! [`integrate_reference`] solves the same Schrödinger equation by
//! fixed-step fourth-order Runge-Kutta. It shares no code path with the
//! Taylor evolver and serves as its cross-method oracle.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::Operator;
use crate::space::{HilbertSpec, StateVector};
use crate::sparse::SpMat;
use crate::tol;

/// One evolution problem: which Hamiltonian, for how long, on what input.
#[derive(Clone, Debug)]
pub struct EvolutionRequest<'a> {
    pub hamiltonian: &'a Operator,
    pub input: &'a StateVector,
    pub duration: f64,
    pub tolerance: f64,
}

impl<'a> EvolutionRequest<'a> {
    pub fn new(hamiltonian: &'a Operator, input: &'a StateVector, duration: f64) -> Self {
        EvolutionRequest { hamiltonian, input, duration, tolerance: tol::EVOLVE_DEFAULT }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.hamiltonian.spec() != self.input.spec() {
            return Err(Error::SpecMismatch("evolution request".into()));
        }
        if !self.duration.is_finite() || self.duration < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "duration must be finite and >= 0, got {}",
                self.duration
            )));
        }
        Ok(())
    }
}

/// Evolution output with its truncation diagnostics. `guard_mass` is the
/// probability that either mode sits in its top Fock level; when it exceeds
/// the truncation budget the result carries a warning instead of failing.
#[derive(Clone, Debug)]
pub struct Evolved {
    pub state: StateVector,
    pub guard_mass: f64,
    pub truncation_warning: bool,
}

fn diagnose(state: StateVector) -> Result<Evolved> {
    if !state.is_finite() {
        return Err(Error::NumericFailure("non-finite amplitudes after evolution".into()));
    }
    let guard_mass = top_level_mass(&state);
    Ok(Evolved { state, guard_mass, truncation_warning: guard_mass > tol::TRUNCATION_BUDGET })
}

fn top_level_mass(state: &StateVector) -> f64 {
    let spec = state.spec();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let (n_a, n_b, _) = spec.unpack(*i);
            n_a == spec.cutoff_a() - 1 || n_b == spec.cutoff_b() - 1
        })
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// exp(−iHt) ψ by scaled Taylor action.
pub fn evolve(req: &EvolutionRequest) -> Result<Evolved> {
    req.validate()?;
    if req.duration == 0.0 {
        return diagnose(req.input.clone());
    }
    let mat = req.hamiltonian.mat();
    // shift by the mean diagonal so free-oscillation offsets do not
    // inflate the segment count
    let dim = mat.nrows() as f64;
    let mu = mat.trace().re / dim;
    let shifted = mat.sub(&SpMat::diagonal(&vec![C64::new(mu, 0.0); mat.nrows()]));
    let gen = shifted.scaled(C64::new(0.0, -req.duration));
    let mut amps = expm_action(&gen, req.input.amplitudes(), req.tolerance)?;
    let phase = C64::from_polar(1.0, -mu * req.duration);
    for a in amps.iter_mut() {
        *a *= phase;
    }
    diagnose(StateVector::from_amplitudes(req.input.spec(), amps)?)
}

/// exp(A) v for a general sparse A, Taylor series with norm-based segmenting.
pub(crate) fn expm_action(a: &SpMat, v: &[C64], tolerance: f64) -> Result<Vec<C64>> {
    let norm = a.inf_norm();
    if !norm.is_finite() {
        return Err(Error::NumericFailure("generator has non-finite entries".into()));
    }
    let segments = norm.ceil().max(1.0) as usize;
    let seg = a.scaled(C64::new(1.0 / segments as f64, 0.0));
    let tol_per_seg = (tolerance / segments as f64).max(1e-16);
    let mut current = v.to_vec();
    for _ in 0..segments {
        let mut acc = current.clone();
        let mut term = current.clone();
        let scale: f64 = current.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
        for k in 1..=60usize {
            term = seg.matvec(&term);
            let inv_k = C64::new(1.0 / k as f64, 0.0);
            let mut term_norm_sq = 0.0;
            for (t, s) in term.iter_mut().zip(acc.iter_mut()) {
                *t *= inv_k;
                *s += *t;
                term_norm_sq += t.norm_sqr();
            }
            if term_norm_sq.sqrt() <= tol_per_seg * scale {
                break;
            }
            if k == 60 {
                return Err(Error::NumericFailure(
                    "Taylor series for the exponential action did not converge".into(),
                ));
            }
        }
        current = acc;
    }
    if current.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::NumericFailure("non-finite amplitudes in exponential action".into()));
    }
    Ok(current)
}

/// Fixed-step RK4 integration of dψ/dt = −iHψ; the evolver's oracle.
pub fn integrate_reference(req: &EvolutionRequest) -> Result<Evolved> {
    req.validate()?;
    if req.duration == 0.0 {
        return diagnose(req.input.clone());
    }
    let mat = req.hamiltonian.mat();
    let norm = mat.inf_norm();
    // step small enough that accumulated fourth-order error stays well
    // below the oracle-agreement tolerance
    let steps = ((norm * req.duration / 0.025).ceil() as usize).max(16);
    let h = req.duration / steps as f64;
    if h == 0.0 || !h.is_finite() {
        return Err(Error::NumericFailure("step size underflow in reference integrator".into()));
    }
    let minus_i = C64::new(0.0, -1.0);
    let deriv = |v: &[C64]| -> Vec<C64> {
        let mut out = mat.matvec(v);
        for x in out.iter_mut() {
            *x *= minus_i;
        }
        out
    };
    let mut y = req.input.amplitudes().to_vec();
    let n = y.len();
    for _ in 0..steps {
        let k1 = deriv(&y);
        let mut tmp = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            tmp[i] = y[i] + k1[i] * C64::new(h / 2.0, 0.0);
        }
        let k2 = deriv(&tmp);
        for i in 0..n {
            tmp[i] = y[i] + k2[i] * C64::new(h / 2.0, 0.0);
        }
        let k3 = deriv(&tmp);
        for i in 0..n {
            tmp[i] = y[i] + k3[i] * C64::new(h, 0.0);
        }
        let k4 = deriv(&tmp);
        for i in 0..n {
            y[i] += (k1[i] + (k2[i] + k3[i]) * C64::new(2.0, 0.0) + k4[i])
                * C64::new(h / 6.0, 0.0);
        }
    }
    diagnose(StateVector::from_amplitudes(req.input.spec(), y)?)
}

/// Rotating frames the simulator can align states into.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Frame {
    /// exp[−i(ν b†b + δ_cA a†a)t], the free oscillation of both modes.
    FreeOscillation { nu: f64, delta_ca: f64 },
}

/// Apply the diagonal frame phase to every amplitude; exactly norm-preserving.
pub fn frame_transform(state: &StateVector, t: f64, frame: Frame) -> StateVector {
    let Frame::FreeOscillation { nu, delta_ca } = frame;
    let spec: HilbertSpec = state.spec();
    let mut out = state.clone();
    for (i, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let (n_a, n_b, _) = spec.unpack(i);
        *a *= C64::from_polar(1.0, -(nu * n_b as f64 + delta_ca * n_a as f64) * t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_effective, EffectiveModel};
    use crate::space::Internal;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn fid(x: &StateVector, y: &StateVector) -> f64 {
        x.inner(y).unwrap().norm_sqr()
    }

    #[test]
    fn zero_duration_is_identity() {
        let spec = HilbertSpec::new(4, 4).unwrap();
        let h = build_effective(spec, EffectiveModel::BeamSplitter, 1.0).unwrap();
        let v = StateVector::fock(spec, 0, 1, Internal::E).unwrap();
        let out = evolve(&EvolutionRequest::new(&h, &v, 0.0)).unwrap();
        assert!((fid(&out.state, &v) - 1.0).abs() < 1e-15);
        let out = integrate_reference(&EvolutionRequest::new(&h, &v, 0.0)).unwrap();
        assert!((fid(&out.state, &v) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn beam_splitter_quarter_turn_on_single_quantum() {
        // |0,1,e⟩ rotates toward |1,0,e⟩: cos θ |0,1⟩ + sin θ |1,0⟩
        let spec = HilbertSpec::new(4, 4).unwrap();
        let h = build_effective(spec, EffectiveModel::BeamSplitter, 1.0).unwrap();
        let v = StateVector::fock(spec, 0, 1, Internal::E).unwrap();
        let theta = FRAC_PI_4;
        let out = evolve(&EvolutionRequest::new(&h, &v, theta)).unwrap();
        let a01 = out.state.amplitudes()[spec.index_of(0, 1, Internal::E)];
        let a10 = out.state.amplitudes()[spec.index_of(1, 0, Internal::E)];
        assert!((a01 - C64::new(theta.cos(), 0.0)).norm() < 1e-12);
        assert!((a10 - C64::new(theta.sin(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn half_turn_swaps_modes_with_sign() {
        // Ω₁t = π/2 on the e sector: |0,1,e⟩ → |1,0,e⟩
        let spec = HilbertSpec::new(4, 4).unwrap();
        let h = build_effective(spec, EffectiveModel::BeamSplitter, 1.0).unwrap();
        let v = StateVector::fock(spec, 0, 1, Internal::E).unwrap();
        let out = evolve(&EvolutionRequest::new(&h, &v, FRAC_PI_2)).unwrap();
        let target = StateVector::fock(spec, 1, 0, Internal::E).unwrap();
        assert!((fid(&out.state, &target) - 1.0).abs() < 1e-12);
        // and on the g sector the rotation runs the other way
        let v = StateVector::fock(spec, 0, 1, Internal::G).unwrap();
        let out = evolve(&EvolutionRequest::new(&h, &v, FRAC_PI_2)).unwrap();
        let a10 = out.state.amplitudes()[spec.index_of(1, 0, Internal::G)];
        assert!((a10 - C64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn beam_splitter_transforms_coherent_products() {
        // e-sector quarter turn: |α⟩|β⟩ → |(α+β)/√2⟩|(β−α)/√2⟩,
        // half turn: |α⟩|β⟩ → |β⟩|−α⟩
        use crate::protocols::measure_internal;
        use crate::targets::coherent_product;
        let spec = HilbertSpec::new(25, 25).unwrap();
        let h = build_effective(spec, EffectiveModel::BeamSplitter, 1.0).unwrap();
        let alpha = C64::new(0.8, 0.0);
        let beta = C64::new(0.0, 0.4);
        let input = coherent_product(spec, alpha, beta).unwrap().embed(Internal::E).unwrap();
        let sqrt2 = C64::new(2.0_f64.sqrt(), 0.0);

        let quarter = evolve(&EvolutionRequest::new(&h, &input, FRAC_PI_4)).unwrap();
        let (_, post) = measure_internal(&quarter.state, Internal::E).unwrap();
        let want =
            coherent_product(spec, (alpha + beta) / sqrt2, (beta - alpha) / sqrt2).unwrap();
        assert!((post.inner(&want).unwrap().norm_sqr() - 1.0).abs() < 1e-9);

        let half = evolve(&EvolutionRequest::new(&h, &input, FRAC_PI_2)).unwrap();
        let (_, post) = measure_internal(&half.state, Internal::E).unwrap();
        let want = coherent_product(spec, beta, -alpha).unwrap();
        assert!((post.inner(&want).unwrap().norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phase_gate_pi_pulse_flips_sign() {
        let spec = HilbertSpec::new(3, 3).unwrap();
        let h = build_effective(spec, EffectiveModel::PhaseGate, 1.0).unwrap();
        let v = StateVector::fock(spec, 1, 1, Internal::G).unwrap();
        let out = evolve(&EvolutionRequest::new(&h, &v, PI)).unwrap();
        let amp = out.state.amplitudes()[spec.index_of(1, 1, Internal::G)];
        assert!((amp - C64::new(-1.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn unitarity_and_composition() {
        let spec = HilbertSpec::new(6, 6).unwrap();
        let h = build_effective(spec, EffectiveModel::Squeeze, 0.8).unwrap();
        let v = StateVector::fock(spec, 0, 0, Internal::E).unwrap();
        let full = evolve(&EvolutionRequest::new(&h, &v, 0.6)).unwrap();
        assert!((full.state.norm() - 1.0).abs() < 1e-10);
        let part = evolve(&EvolutionRequest::new(&h, &v, 0.25)).unwrap();
        let rest = evolve(&EvolutionRequest::new(&h, &part.state, 0.35)).unwrap();
        assert!((fid(&full.state, &rest.state) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sector_blocks_stay_separate() {
        let spec = HilbertSpec::new(5, 5).unwrap();
        let sector_mass = |state: &StateVector, sector: Internal| -> f64 {
            state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    let (_, _, s) = spec.unpack(*i);
                    s == sector
                })
                .map(|(_, a)| a.norm_sqr())
                .sum()
        };
        for model in [EffectiveModel::BeamSplitter, EffectiveModel::Squeeze] {
            let h = build_effective(spec, model, 1.0).unwrap();
            let e_in = StateVector::fock(spec, 0, 2, Internal::E).unwrap();
            let out = evolve(&EvolutionRequest::new(&h, &e_in, 0.9)).unwrap();
            assert!(sector_mass(&out.state, Internal::G) < 1e-28, "{model:?}");
            let g_in = StateVector::fock(spec, 0, 2, Internal::G).unwrap();
            let out = evolve(&EvolutionRequest::new(&h, &g_in, 0.9)).unwrap();
            assert!(sector_mass(&out.state, Internal::E) < 1e-28, "{model:?}");
        }
    }

    #[test]
    fn reference_integrator_agrees_with_evolver() {
        let spec = HilbertSpec::new(8, 8).unwrap();
        let v = StateVector::fock(spec, 0, 1, Internal::E).unwrap();
        let h1 = build_effective(spec, EffectiveModel::BeamSplitter, 1.0).unwrap();
        let req = EvolutionRequest::new(&h1, &v, FRAC_PI_4);
        let taylor = evolve(&req).unwrap();
        let rk4 = integrate_reference(&req).unwrap();
        assert!(fid(&taylor.state, &rk4.state) >= 1.0 - 1e-8);

        let v = StateVector::fock(spec, 0, 0, Internal::E).unwrap();
        let h2 = build_effective(spec, EffectiveModel::Squeeze, 1.0).unwrap();
        let req = EvolutionRequest::new(&h2, &v, 0.5);
        let taylor = evolve(&req).unwrap();
        let rk4 = integrate_reference(&req).unwrap();
        assert!(fid(&taylor.state, &rk4.state) >= 1.0 - 1e-8);
    }

    #[test]
    fn frame_transform_phases() {
        let spec = HilbertSpec::new(3, 3).unwrap();
        let v = StateVector::fock(spec, 1, 0, Internal::G).unwrap();
        // δ_cA t = π puts a −1 on |1,0⟩
        let out = frame_transform(&v, 1.0, Frame::FreeOscillation { nu: 0.3, delta_ca: PI });
        let amp = out.amplitudes()[spec.index_of(1, 0, Internal::G)];
        assert!((amp - C64::new(-1.0, 0.0)).norm() < 1e-14);
        // identity at t = 0 and exact norm preservation
        let out = frame_transform(&v, 0.0, Frame::FreeOscillation { nu: 0.3, delta_ca: PI });
        assert!((fid(&out, &v) - 1.0).abs() < 1e-15);
        let mut messy = StateVector::fock(spec, 1, 2, Internal::E).unwrap();
        messy
            .add_scaled(&StateVector::fock(spec, 0, 1, Internal::G).unwrap(), C64::new(0.6, 0.2))
            .unwrap();
        let n0 = messy.norm();
        let out = frame_transform(&messy, 2.7, Frame::FreeOscillation { nu: 1.1, delta_ca: 0.4 });
        assert!((out.norm() - n0).abs() < 1e-14);
    }

    #[test]
    fn truncation_warning_from_overdriven_squeeze() {
        // squeeze hard at a tiny cutoff: mass piles up at the top levels
        let spec = HilbertSpec::new(4, 4).unwrap();
        let h = build_effective(spec, EffectiveModel::Squeeze, 1.0).unwrap();
        let v = StateVector::fock(spec, 0, 0, Internal::E).unwrap();
        let out = evolve(&EvolutionRequest::new(&h, &v, 1.5)).unwrap();
        assert!(out.truncation_warning);
        assert!(out.guard_mass > 1e-10);
    }

    #[test]
    fn negative_duration_rejected() {
        let spec = HilbertSpec::new(3, 3).unwrap();
        let h = build_effective(spec, EffectiveModel::BeamSplitter, 1.0).unwrap();
        let v = StateVector::fock(spec, 0, 0, Internal::G).unwrap();
        assert!(evolve(&EvolutionRequest::new(&h, &v, -1.0)).is_err());
    }
}
