//! Analytic constructors for the two-mode states the protocols aim at:
//! coherent products, SU(2) coherent states and cats, entangled coherent
//! pairs, two-mode squeezed vacuum and squeezed cats.
//!
//! Cats come back normalized together with the squared norm of the
//! unnormalized superposition; detection probabilities are built from
//! those norms.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::evolution::expm_action;
use crate::operators::{compose_two_mode, lower, raise};
use crate::space::{HilbertSpec, TwoModeState};
use crate::tol;

/// Superposition parity: the relative sign between the two components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
        }
    }
}

/// Which beam-splitter interaction time the entangled pair came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EcsVariant {
    /// Interaction time Ω₁t = π/4.
    HalfAngle,
    /// Interaction time Ω₁t = π/2; modes swap up to signs.
    FullSwap,
}

/// A normalized cat state plus the squared norm of the unnormalized sum.
#[derive(Clone, Debug)]
pub struct CatState {
    pub state: TwoModeState,
    pub unnormalized_norm_sq: f64,
}

/// Truncated, renormalized coherent amplitudes c_n = e^{−|α|²/2} αⁿ/√n!.
/// Fails when the Poisson tail beyond `cutoff` exceeds the truncation
/// budget, reporting the smallest sufficient cutoff.
pub fn coherent_factor(cutoff: usize, alpha: C64) -> Result<Vec<C64>> {
    let required = coherent_required_cutoff(alpha)?;
    if required > cutoff {
        return Err(Error::TruncationBudget { required, have: cutoff });
    }
    let mut amps = Vec::with_capacity(cutoff);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..cutoff {
        amps.push(c);
        c *= alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    Ok(amps)
}

/// Smallest cutoff whose Poisson tail is below the truncation budget.
pub fn coherent_required_cutoff(alpha: C64) -> Result<usize> {
    let mean = alpha.norm_sqr();
    if !mean.is_finite() {
        return Err(Error::InvalidArgument("coherent amplitude must be finite".into()));
    }
    let mut p = (-mean).exp();
    let mut cumulative = p;
    for n in 0..100_000usize {
        if 1.0 - cumulative < tol::TRUNCATION_BUDGET {
            return Ok(n + 1);
        }
        p *= mean / (n + 1) as f64;
        cumulative += p;
    }
    Err(Error::InvalidArgument(format!(
        "coherent amplitude |α| = {:.3} too large for any reasonable cutoff",
        alpha.norm()
    )))
}

/// Product coherent state |α⟩_a |β⟩_b.
pub fn coherent_product(spec: HilbertSpec, alpha: C64, beta: C64) -> Result<TwoModeState> {
    let fa = coherent_factor(spec.cutoff_a(), alpha)?;
    let fb = coherent_factor(spec.cutoff_b(), beta)?;
    let mut amps = Vec::with_capacity(fa.len() * fb.len());
    for &ca in &fa {
        for &cb in &fb {
            amps.push(ca * cb);
        }
    }
    TwoModeState::from_amplitudes(spec.cutoff_a(), spec.cutoff_b(), amps)
}

fn su2_generator(spec: HilbertSpec, xi: C64) -> crate::sparse::SpMat {
    // ξ a†b − ξ* ab†, anti-Hermitian for any complex ξ
    let (ca, cb) = (spec.cutoff_a(), spec.cutoff_b());
    compose_two_mode(&raise(ca), &lower(cb))
        .scaled(xi)
        .sub(&compose_two_mode(&lower(ca), &raise(cb)).scaled(xi.conj()))
}

/// exp[ξ a†b − ξ* ab†] |0, n⟩, the two-mode realization of a spin-n/2
/// coherent state. Equals the binomial state with amplitudes
/// √C(n,k) cos^{n−k}|ξ| (e^{i arg ξ} sin|ξ|)^k on |k, n−k⟩.
pub fn su2_coherent_state(spec: HilbertSpec, xi: C64, n: usize) -> Result<TwoModeState> {
    if n >= spec.cutoff_a() || n >= spec.cutoff_b() {
        return Err(Error::InvalidArgument(format!(
            "excitation number {n} needs cutoffs > {n}, have ({}, {})",
            spec.cutoff_a(),
            spec.cutoff_b()
        )));
    }
    let seed = TwoModeState::fock(spec.cutoff_a(), spec.cutoff_b(), 0, n)?;
    let amps = expm_action(&su2_generator(spec, xi), seed.amplitudes(), tol::EVOLVE_DEFAULT)?;
    let mut out = TwoModeState::from_amplitudes(spec.cutoff_a(), spec.cutoff_b(), amps)?;
    out.normalize()?;
    Ok(out)
}

/// Normalized (exp[+G] ± exp[−G]) |0, n⟩ with G = θ(a†b − ab†).
pub fn su2_cat(spec: HilbertSpec, theta: f64, n: usize, parity: Parity) -> Result<CatState> {
    if n >= spec.cutoff_a() || n >= spec.cutoff_b() {
        return Err(Error::InvalidArgument(format!(
            "excitation number {n} needs cutoffs > {n}, have ({}, {})",
            spec.cutoff_a(),
            spec.cutoff_b()
        )));
    }
    let plus = su2_coherent_state(spec, C64::new(theta, 0.0), n)?;
    let minus = su2_coherent_state(spec, C64::new(-theta, 0.0), n)?;
    cat_from_components(plus, minus, parity)
}

/// The two entangled coherent pairs reachable by beam-splitter plus
/// detection, normalized.
pub fn entangled_coherent_pair(
    spec: HilbertSpec,
    alpha: C64,
    beta: C64,
    variant: EcsVariant,
    parity: Parity,
) -> Result<CatState> {
    let sqrt2 = C64::new(2.0_f64.sqrt(), 0.0);
    let (first, second) = match variant {
        EcsVariant::HalfAngle => (
            coherent_product(spec, (alpha + beta) / sqrt2, (beta - alpha) / sqrt2)?,
            coherent_product(spec, (alpha - beta) / sqrt2, (alpha + beta) / sqrt2)?,
        ),
        EcsVariant::FullSwap => (
            coherent_product(spec, beta, -alpha)?,
            coherent_product(spec, -beta, alpha)?,
        ),
    };
    cat_from_components(first, second, parity)
}

/// Two-mode squeezed vacuum with squeeze parameter r: amplitudes
/// tanhⁿ(r)/cosh(r) on the diagonal |n, n⟩, zero elsewhere. Negative r
/// alternates the sign of odd diagonal entries.
pub fn two_mode_squeezed_vacuum(spec: HilbertSpec, r: f64) -> Result<TwoModeState> {
    let support = spec.cutoff_a().min(spec.cutoff_b());
    let required = squeeze_required_cutoff(r)?;
    if required > support {
        return Err(Error::TruncationBudget { required, have: support });
    }
    let t = r.tanh();
    let mut out = TwoModeState::zero(spec.cutoff_a(), spec.cutoff_b());
    let mut c = 1.0 / r.cosh();
    for n in 0..support {
        let idx = out.index_of(n, n);
        out.amplitudes_mut()[idx] = C64::new(c, 0.0);
        c *= t;
    }
    out.normalize()?;
    Ok(out)
}

/// Smallest diagonal support with squeeze tail |tanh r|^{2c} inside budget.
pub fn squeeze_required_cutoff(r: f64) -> Result<usize> {
    if !r.is_finite() {
        return Err(Error::InvalidArgument("squeeze parameter must be finite".into()));
    }
    let t = r.tanh().abs();
    if t == 0.0 {
        return Ok(1);
    }
    Ok((tol::TRUNCATION_BUDGET.ln() / (2.0 * t.ln())).ceil() as usize + 1)
}

/// Normalized [S(r) ± S(−r)] |0,0⟩ over the squeezed vacua S(±r)|0,0⟩.
/// The + cat keeps the even diagonal |2k, 2k⟩, the − cat the odd diagonal;
/// at r = 0 the − combination cancels exactly.
pub fn squeezed_cat(spec: HilbertSpec, r: f64, parity: Parity) -> Result<CatState> {
    let plus = two_mode_squeezed_vacuum(spec, r)?;
    let minus = two_mode_squeezed_vacuum(spec, -r)?;
    cat_from_components(plus, minus, parity)
}

fn cat_from_components(
    first: TwoModeState,
    second: TwoModeState,
    parity: Parity,
) -> Result<CatState> {
    let mut sum = first;
    sum.add_scaled(&second, C64::new(parity.sign(), 0.0))?;
    let norm_sq = sum.norm().powi(2);
    if norm_sq < tol::DEGENERATE_NORM_SQ {
        return Err(Error::DegenerateState(format!(
            "parity {} superposition cancels (norm² = {norm_sq:.3e})",
            parity.label()
        )));
    }
    sum.normalize()?;
    Ok(CatState { state: sum, unnormalized_norm_sq: norm_sq })
}
