//! Ladder and qubit operators on the composite space.
//!
//! Single-mode conventions: a|n⟩ = √n |n−1⟩, a†|n⟩ = √(n+1) |n+1⟩ (cut off
//! at the top level), σ₋ = |g⟩⟨e|, σ₊ = |e⟩⟨g|, σ_z = |e⟩⟨e| − |g⟩⟨g|.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::space::{HilbertSpec, StateVector};
use crate::sparse::SpMat;

/// A complex operator on the composite space, sparse-stored.
#[derive(Clone, Debug)]
pub struct Operator {
    spec: HilbertSpec,
    mat: SpMat,
    hermitian: bool,
}

impl Operator {
    pub(crate) fn new(spec: HilbertSpec, mat: SpMat) -> Result<Self> {
        if mat.nrows() != spec.dim() || mat.ncols() != spec.dim() {
            return Err(Error::Internal(format!(
                "operator of shape {}x{} on a space of dimension {}",
                mat.nrows(),
                mat.ncols(),
                spec.dim()
            )));
        }
        let hermitian = mat.hermiticity_defect() < crate::tol::HERMITICITY_MAX;
        Ok(Operator { spec, mat, hermitian })
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn mat(&self) -> &SpMat {
        &self.mat
    }

    /// True when ‖M − M†‖_max was below tolerance at construction.
    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.mat.hermiticity_defect()
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.spec() != self.spec {
            return Err(Error::SpecMismatch("operator application".into()));
        }
        StateVector::from_amplitudes(self.spec, self.mat.matvec(v.amplitudes()))
    }

    /// ⟨v| M |v⟩.
    pub fn expectation(&self, v: &StateVector) -> Result<C64> {
        let mv = self.apply(v)?;
        v.inner(&mv)
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch("operator sum".into()));
        }
        Operator::new(self.spec, self.mat.add(&other.mat))
    }

    pub fn scaled(&self, s: C64) -> Result<Operator> {
        Operator::new(self.spec, self.mat.scaled(s))
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch("operator product".into()));
        }
        Operator::new(self.spec, self.mat.matmul(&other.mat))
    }
}

/// Single-mode annihilation operator on `dim` Fock levels.
pub(crate) fn lower(dim: usize) -> SpMat {
    let triplets = (1..dim)
        .map(|n| (n - 1, n, C64::new((n as f64).sqrt(), 0.0)))
        .collect();
    SpMat::from_triplets(dim, dim, triplets)
}

pub(crate) fn raise(dim: usize) -> SpMat {
    lower(dim).adjoint()
}

pub(crate) fn number(dim: usize) -> SpMat {
    SpMat::diagonal(&(0..dim).map(|n| C64::new(n as f64, 0.0)).collect::<Vec<_>>())
}

/// b† + b (position quadrature up to normalization).
pub(crate) fn quadrature(dim: usize) -> SpMat {
    raise(dim).add(&lower(dim))
}

pub(crate) fn sigma_minus_2() -> SpMat {
    // |g⟩⟨e|
    SpMat::from_triplets(2, 2, vec![(0, 1, C64::new(1.0, 0.0))])
}

pub(crate) fn sigma_plus_2() -> SpMat {
    SpMat::from_triplets(2, 2, vec![(1, 0, C64::new(1.0, 0.0))])
}

pub(crate) fn sigma_z_2() -> SpMat {
    SpMat::diagonal(&[C64::new(-1.0, 0.0), C64::new(1.0, 0.0)])
}

pub(crate) fn sigma_ee_2() -> SpMat {
    SpMat::diagonal(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
}

/// Lift (cavity ⊗ vibration ⊗ qubit) factors to the composite space,
/// matching the frozen basis ordering (cavity slowest, qubit fastest).
pub(crate) fn compose(a_part: &SpMat, b_part: &SpMat, q_part: &SpMat) -> SpMat {
    a_part.kron(&b_part.kron(q_part))
}

/// Lift a two-mode (cavity ⊗ vibration) factor pair, no qubit.
pub(crate) fn compose_two_mode(a_part: &SpMat, b_part: &SpMat) -> SpMat {
    a_part.kron(b_part)
}

/// The full set of mode and qubit operators on the composite space.
pub struct ModeOperators {
    pub a: Operator,
    pub a_dag: Operator,
    pub b: Operator,
    pub b_dag: Operator,
    pub sigma_plus: Operator,
    pub sigma_minus: Operator,
    pub sigma_z: Operator,
}

pub fn make_mode_operators(spec: HilbertSpec) -> ModeOperators {
    let (ca, cb) = (spec.cutoff_a(), spec.cutoff_b());
    let (ia, ib, iq) = (SpMat::identity(ca), SpMat::identity(cb), SpMat::identity(2));
    let build = |m: SpMat| Operator::new(spec, m).expect("dimensions fixed by construction");
    ModeOperators {
        a: build(compose(&lower(ca), &ib, &iq)),
        a_dag: build(compose(&raise(ca), &ib, &iq)),
        b: build(compose(&ia, &lower(cb), &iq)),
        b_dag: build(compose(&ia, &raise(cb), &iq)),
        sigma_plus: build(compose(&ia, &ib, &sigma_plus_2())),
        sigma_minus: build(compose(&ia, &ib, &sigma_minus_2())),
        sigma_z: build(compose(&ia, &ib, &sigma_z_2())),
    }
}

/// Diagonal of n̂_a + n̂_b over the composite basis.
pub fn total_number_diagonal(spec: HilbertSpec) -> Vec<C64> {
    (0..spec.dim())
        .map(|i| {
            let (n_a, n_b, _) = spec.unpack(i);
            C64::new((n_a + n_b) as f64, 0.0)
        })
        .collect()
}

/// Diagonal of n̂_a − n̂_b.
pub fn number_difference_diagonal(spec: HilbertSpec) -> Vec<C64> {
    (0..spec.dim())
        .map(|i| {
            let (n_a, n_b, _) = spec.unpack(i);
            C64::new(n_a as f64 - n_b as f64, 0.0)
        })
        .collect()
}

/// Diagonal of n̂_a + σ₊σ₋.
pub fn cavity_plus_excitation_diagonal(spec: HilbertSpec) -> Vec<C64> {
    (0..spec.dim())
        .map(|i| {
            let (n_a, _, s) = spec.unpack(i);
            C64::new((n_a + s.index()) as f64, 0.0)
        })
        .collect()
}
