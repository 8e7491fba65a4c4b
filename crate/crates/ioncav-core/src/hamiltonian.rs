//! Builders for every Hamiltonian of the model, from the driven
//! ion-cavity form down to the three effective interactions.
//!
//! All builders return Hermitian operators on the composite space and
//! verify ‖H − H†‖_max < 1e−12 at build time. Rotating-frame free terms use
//! angular-frequency units consistent with the evolution times handed to
//! [`crate::evolution::evolve`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::{
    compose, lower, number, quadrature, raise, sigma_ee_2, sigma_minus_2, sigma_plus_2,
    sigma_z_2, Operator,
};
use crate::space::HilbertSpec;
use crate::sparse::SpMat;

/// Physical constants of the driven ion-cavity system.
///
/// `nu` is the trap frequency, `delta_ca = ω_cav − ω_laser` and
/// `delta_oa = ω_atom − ω_laser` the detunings, `g0` the vacuum Rabi
/// coupling, `epsilon_a`/`phi_a` the drive amplitude and phase, and `eta`
/// the Lamb-Dicke parameter. The drive enters as ε e^{−iφ} σ₊ + h.c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub nu: f64,
    pub delta_ca: f64,
    pub delta_oa: f64,
    pub g0: f64,
    pub epsilon_a: f64,
    pub phi_a: f64,
    pub eta: f64,
}

impl PhysicalParams {
    pub fn new(
        nu: f64,
        delta_ca: f64,
        delta_oa: f64,
        g0: f64,
        epsilon_a: f64,
        phi_a: f64,
        eta: f64,
    ) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::InvalidArgument(format!("eta must be > 0, got {eta}")));
        }
        for (name, v) in [
            ("nu", nu),
            ("delta_ca", delta_ca),
            ("delta_oa", delta_oa),
            ("g0", g0),
            ("epsilon_a", epsilon_a),
            ("phi_a", phi_a),
            ("eta", eta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        Ok(PhysicalParams { nu, delta_ca, delta_oa, g0, epsilon_a, phi_a, eta })
    }

    /// Drive phase fixed at π/2, the choice the effective interactions assume.
    pub fn with_default_phase(
        nu: f64,
        delta_ca: f64,
        delta_oa: f64,
        g0: f64,
        epsilon_a: f64,
        eta: f64,
    ) -> Result<Self> {
        PhysicalParams::new(nu, delta_ca, delta_oa, g0, epsilon_a, std::f64::consts::FRAC_PI_2, eta)
    }

    /// Beam-splitter strength g₀ ε η / Δ.
    pub fn omega1(&self) -> f64 {
        self.g0 * self.epsilon_a * self.eta / self.delta_oa
    }

    /// Two-mode squeeze strength; same combination as the beam splitter.
    pub fn omega2(&self) -> f64 {
        self.omega1()
    }

    /// Phase-gate coupling g₀ η.
    pub fn omega3(&self) -> f64 {
        self.g0 * self.eta
    }

    /// Whether the internal state is far enough detuned for adiabatic
    /// elimination to be meaningful. Advisory only; builders do not fail.
    pub fn adiabatic_regime_ok(&self) -> bool {
        let d = self.delta_oa;
        d > self.nu && d > self.delta_ca.abs() && d > self.g0 && d > self.epsilon_a
    }
}

/// Which Hamiltonian to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Driven ion-cavity Hamiltonian in the laser frame, Lamb-Dicke
    /// linearized: ν b†b + δ a†a + Δ σ₊σ₋ + (ε e^{−iφ}σ₊ + h.c.)
    /// + g₀η(b†+b)(a†σ₋ + aσ₊).
    Full,
    /// Internal state adiabatically eliminated: ν b†b + δ a†a
    /// − (g₀²/Δ)η²(b†+b)² a†a σ_z − (g₀ε/Δ)η(b†+b)(e^{−iφ}a† + e^{iφ}a)σ_z.
    Eliminated,
    /// H₁ = iΩ₁(a†b − ab†)σ_z.
    BeamSplitter,
    /// H₂ = iΩ₂(ab − a†b†)σ_z.
    Squeeze,
    /// H₃ = Ω₃(abσ₊ + a†b†σ₋).
    PhaseGate,
}

/// The three effective interactions, parametrized by their strength alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EffectiveModel {
    BeamSplitter,
    Squeeze,
    PhaseGate,
}

/// Build the requested Hamiltonian from physical parameters. Effective
/// strengths are derived: Ω₁ = Ω₂ = g₀εη/Δ, Ω₃ = g₀η. Use
/// [`build_effective`] to set a strength directly.
pub fn build_hamiltonian(spec: HilbertSpec, params: &PhysicalParams, model: Model) -> Result<Operator> {
    match model {
        Model::Full => build_full(spec, params),
        Model::Eliminated => build_eliminated(spec, params),
        Model::BeamSplitter => build_effective(spec, EffectiveModel::BeamSplitter, params.omega1()),
        Model::Squeeze => build_effective(spec, EffectiveModel::Squeeze, params.omega2()),
        Model::PhaseGate => build_effective(spec, EffectiveModel::PhaseGate, params.omega3()),
    }
}

/// Build an effective interaction with an explicit strength.
pub fn build_effective(spec: HilbertSpec, model: EffectiveModel, omega: f64) -> Result<Operator> {
    if !omega.is_finite() {
        return Err(Error::InvalidArgument("effective strength must be finite".into()));
    }
    let (ca, cb) = (spec.cutoff_a(), spec.cutoff_b());
    let i = C64::new(0.0, 1.0);
    let re = |x: f64| C64::new(x, 0.0);
    let mat = match model {
        EffectiveModel::BeamSplitter => compose(&raise(ca), &lower(cb), &sigma_z_2())
            .sub(&compose(&lower(ca), &raise(cb), &sigma_z_2()))
            .scaled(i * re(omega)),
        EffectiveModel::Squeeze => compose(&lower(ca), &lower(cb), &sigma_z_2())
            .sub(&compose(&raise(ca), &raise(cb), &sigma_z_2()))
            .scaled(i * re(omega)),
        EffectiveModel::PhaseGate => compose(&lower(ca), &lower(cb), &sigma_plus_2())
            .add(&compose(&raise(ca), &raise(cb), &sigma_minus_2()))
            .scaled(re(omega)),
    };
    finish(spec, mat)
}

fn build_full(spec: HilbertSpec, p: &PhysicalParams) -> Result<Operator> {
    check_lamb_dicke(p)?;
    let (ca, cb) = (spec.cutoff_a(), spec.cutoff_b());
    let (ia, ib, iq) = (SpMat::identity(ca), SpMat::identity(cb), SpMat::identity(2));
    let re = |x: f64| C64::new(x, 0.0);
    let drive = C64::from_polar(p.epsilon_a, -p.phi_a);

    let free = compose(&ia, &number(cb), &iq)
        .scaled(re(p.nu))
        .add(&compose(&number(ca), &ib, &iq).scaled(re(p.delta_ca)))
        .add(&compose(&ia, &ib, &sigma_ee_2()).scaled(re(p.delta_oa)));
    let pump = compose(&ia, &ib, &sigma_plus_2())
        .scaled(drive)
        .add(&compose(&ia, &ib, &sigma_minus_2()).scaled(drive.conj()));
    let coupling = compose(&raise(ca), &quadrature(cb), &sigma_minus_2())
        .add(&compose(&lower(ca), &quadrature(cb), &sigma_plus_2()))
        .scaled(re(p.g0 * p.eta));

    finish(spec, free.add(&pump).add(&coupling))
}

fn build_eliminated(spec: HilbertSpec, p: &PhysicalParams) -> Result<Operator> {
    check_lamb_dicke(p)?;
    if p.delta_oa == 0.0 {
        return Err(Error::InvalidArgument(
            "adiabatic elimination requires a nonzero atom-laser detuning".into(),
        ));
    }
    let (ca, cb) = (spec.cutoff_a(), spec.cutoff_b());
    let (ia, ib, iq) = (SpMat::identity(ca), SpMat::identity(cb), SpMat::identity(2));
    let re = |x: f64| C64::new(x, 0.0);

    let free = compose(&ia, &number(cb), &iq)
        .scaled(re(p.nu))
        .add(&compose(&number(ca), &ib, &iq).scaled(re(p.delta_ca)));

    // Stark-like shift, quadratic in the Lamb-Dicke parameter.
    let quad_sq = quadrature(cb).matmul(&quadrature(cb));
    let stark = compose(&number(ca), &quad_sq, &sigma_z_2())
        .scaled(re(-p.g0 * p.g0 * p.eta * p.eta / p.delta_oa));

    // Cross-mode drive term; with φ = π/2 it reduces to
    // i(g₀εη/Δ)(b†+b)(a†−a)σ_z.
    let phase = C64::from_polar(1.0, -p.phi_a);
    let cavity_part = raise(ca).scaled(phase).add(&lower(ca).scaled(phase.conj()));
    let cross = compose(&cavity_part, &quadrature(cb), &sigma_z_2())
        .scaled(re(-p.g0 * p.epsilon_a * p.eta / p.delta_oa));

    finish(spec, free.add(&stark).add(&cross))
}

fn check_lamb_dicke(p: &PhysicalParams) -> Result<()> {
    if p.eta >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "Lamb-Dicke linearization needs eta < 1, got {}",
            p.eta
        )));
    }
    Ok(())
}

fn finish(spec: HilbertSpec, mat: SpMat) -> Result<Operator> {
    let op = Operator::new(spec, mat)?;
    if !op.hermitian() {
        return Err(Error::Internal(format!(
            "built Hamiltonian is not Hermitian (defect {:.3e})",
            op.hermiticity_defect()
        )));
    }
    Ok(op)
}
