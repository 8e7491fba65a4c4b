//! Composite Hilbert space of (cavity ⊗ vibration ⊗ internal qubit) and the
//! state vectors living on it.
//!
//! Basis ordering is frozen: the basis index of `(n_a, n_b, s)` is
//! `((n_a * cutoff_b) + n_b) * 2 + s` with `s ∈ {g = 0, e = 1}`. The cavity
//! index varies slowest, the qubit fastest. Golden files depend on this.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Internal electronic state of the ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Internal {
    G,
    E,
}

impl Internal {
    pub fn index(self) -> usize {
        match self {
            Internal::G => 0,
            Internal::E => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Internal::G => "g",
            Internal::E => "e",
        }
    }
}

/// Truncation cutoffs of the two bosonic modes; the qubit dimension is 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertSpec {
    cutoff_a: usize,
    cutoff_b: usize,
}

impl HilbertSpec {
    /// Cavity Fock levels `0..cutoff_a`, vibrational levels `0..cutoff_b`.
    pub fn new(cutoff_a: usize, cutoff_b: usize) -> Result<Self> {
        if cutoff_a < 2 || cutoff_b < 2 {
            return Err(Error::InvalidArgument(format!(
                "cutoffs must be >= 2, got ({cutoff_a}, {cutoff_b})"
            )));
        }
        Ok(HilbertSpec { cutoff_a, cutoff_b })
    }

    pub fn cutoff_a(&self) -> usize {
        self.cutoff_a
    }

    pub fn cutoff_b(&self) -> usize {
        self.cutoff_b
    }

    pub fn dim(&self) -> usize {
        self.cutoff_a * self.cutoff_b * 2
    }

    pub fn index_of(&self, n_a: usize, n_b: usize, s: Internal) -> usize {
        debug_assert!(n_a < self.cutoff_a && n_b < self.cutoff_b);
        (n_a * self.cutoff_b + n_b) * 2 + s.index()
    }

    pub fn unpack(&self, index: usize) -> (usize, usize, Internal) {
        debug_assert!(index < self.dim());
        let s = if index % 2 == 0 { Internal::G } else { Internal::E };
        let rest = index / 2;
        (rest / self.cutoff_b, rest % self.cutoff_b, s)
    }
}

/// Normalized complex amplitude vector over the composite basis.
#[derive(Clone, Debug)]
pub struct StateVector {
    spec: HilbertSpec,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(spec: HilbertSpec) -> Self {
        StateVector { spec, amps: vec![C64::new(0.0, 0.0); spec.dim()] }
    }

    pub fn from_amplitudes(spec: HilbertSpec, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != spec.dim() {
            return Err(Error::SpecMismatch(format!(
                "amplitude vector of length {} on a space of dimension {}",
                amps.len(),
                spec.dim()
            )));
        }
        Ok(StateVector { spec, amps })
    }

    /// Basis state |n_a, n_b, s⟩.
    pub fn fock(spec: HilbertSpec, n_a: usize, n_b: usize, s: Internal) -> Result<Self> {
        if n_a >= spec.cutoff_a() || n_b >= spec.cutoff_b() {
            return Err(Error::InvalidArgument(format!(
                "Fock numbers ({n_a}, {n_b}) outside cutoffs ({}, {})",
                spec.cutoff_a(),
                spec.cutoff_b()
            )));
        }
        let mut v = StateVector::zero(spec);
        v.amps[spec.index_of(n_a, n_b, s)] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch("inner product".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::DegenerateState("cannot normalize a zero vector".into()));
        }
        for a in self.amps.iter_mut() {
            *a /= n;
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &StateVector, s: C64) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch("state sum".into()));
        }
        for (a, b) in self.amps.iter_mut().zip(other.amps.iter()) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, s: C64) {
        for a in self.amps.iter_mut() {
            *a *= s;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Rotate the global phase so the first amplitude above `1e-12` in
    /// magnitude is real nonnegative. Dumped amplitudes stay deterministic.
    pub fn phase_align(&mut self) {
        phase_align_slice(&mut self.amps);
    }
}

/// Pure state of the two bosonic modes after the internal state has been
/// measured away; amplitudes indexed by `n_a * cutoff_b + n_b`.
#[derive(Clone, Debug)]
pub struct TwoModeState {
    cutoff_a: usize,
    cutoff_b: usize,
    amps: Vec<C64>,
}

impl TwoModeState {
    pub fn zero(cutoff_a: usize, cutoff_b: usize) -> Self {
        TwoModeState { cutoff_a, cutoff_b, amps: vec![C64::new(0.0, 0.0); cutoff_a * cutoff_b] }
    }

    pub fn from_amplitudes(cutoff_a: usize, cutoff_b: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != cutoff_a * cutoff_b {
            return Err(Error::SpecMismatch(format!(
                "two-mode amplitude vector of length {} for cutoffs ({cutoff_a}, {cutoff_b})",
                amps.len()
            )));
        }
        Ok(TwoModeState { cutoff_a, cutoff_b, amps })
    }

    pub fn fock(cutoff_a: usize, cutoff_b: usize, n_a: usize, n_b: usize) -> Result<Self> {
        if n_a >= cutoff_a || n_b >= cutoff_b {
            return Err(Error::InvalidArgument(format!(
                "Fock numbers ({n_a}, {n_b}) outside cutoffs ({cutoff_a}, {cutoff_b})"
            )));
        }
        let mut v = TwoModeState::zero(cutoff_a, cutoff_b);
        v.amps[n_a * cutoff_b + n_b] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn cutoff_a(&self) -> usize {
        self.cutoff_a
    }

    pub fn cutoff_b(&self) -> usize {
        self.cutoff_b
    }

    pub fn index_of(&self, n_a: usize, n_b: usize) -> usize {
        debug_assert!(n_a < self.cutoff_a && n_b < self.cutoff_b);
        n_a * self.cutoff_b + n_b
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> C64 {
        self.amps[self.index_of(n_a, n_b)]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &TwoModeState) -> Result<C64> {
        if self.cutoff_a != other.cutoff_a || self.cutoff_b != other.cutoff_b {
            return Err(Error::SpecMismatch("two-mode inner product".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::DegenerateState("cannot normalize a zero vector".into()));
        }
        for a in self.amps.iter_mut() {
            *a /= n;
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &TwoModeState, s: C64) -> Result<()> {
        if self.cutoff_a != other.cutoff_a || self.cutoff_b != other.cutoff_b {
            return Err(Error::SpecMismatch("two-mode state sum".into()));
        }
        for (a, b) in self.amps.iter_mut().zip(other.amps.iter()) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn phase_align(&mut self) {
        phase_align_slice(&mut self.amps);
    }

    /// Tensor back with a definite internal state.
    pub fn embed(&self, s: Internal) -> Result<StateVector> {
        let spec = HilbertSpec::new(self.cutoff_a, self.cutoff_b)?;
        let mut out = StateVector::zero(spec);
        for n_a in 0..self.cutoff_a {
            for n_b in 0..self.cutoff_b {
                out.amps[spec.index_of(n_a, n_b, s)] = self.amplitude(n_a, n_b);
            }
        }
        Ok(out)
    }
}

fn phase_align_slice(amps: &mut [C64]) {
    let lead = amps.iter().find(|a| a.norm() > 1e-12);
    if let Some(&a) = lead {
        let phase = a / a.norm();
        let correction = phase.conj();
        for v in amps.iter_mut() {
            *v *= correction;
        }
    }
}
