//! Diagnostics over states: overlaps and fidelity, photon-number
//! statistics, truncation mass and bipartite entanglement entropy.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::space::{StateVector, TwoModeState};
use crate::tol;

/// |⟨x|y⟩|² together with the raw overlap it came from.
#[derive(Clone, Copy, Debug)]
pub struct FidelityReport {
    pub fidelity: f64,
    pub overlap: C64,
    /// Whether the inputs were rotated to the deterministic global-phase
    /// convention before the overlap; the fidelity itself is phase-free.
    pub phase_aligned: bool,
}

impl FidelityReport {
    fn from_overlap(overlap: C64, phase_aligned: bool) -> Self {
        FidelityReport { fidelity: overlap.norm_sqr(), overlap, phase_aligned }
    }
}

pub fn fidelity(x: &StateVector, y: &StateVector) -> Result<FidelityReport> {
    Ok(FidelityReport::from_overlap(x.inner(y)?, false))
}

pub fn fidelity_two_mode(x: &TwoModeState, y: &TwoModeState) -> Result<FidelityReport> {
    Ok(FidelityReport::from_overlap(x.inner(y)?, false))
}

/// Which bosonic mode a marginal refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BosonMode {
    A,
    B,
}

/// Marginal photon-number distribution of one mode.
pub fn mode_distribution(x: &TwoModeState, mode: BosonMode) -> Vec<f64> {
    let (ca, cb) = (x.cutoff_a(), x.cutoff_b());
    match mode {
        BosonMode::A => (0..ca)
            .map(|n_a| (0..cb).map(|n_b| x.amplitude(n_a, n_b).norm_sqr()).sum())
            .collect(),
        BosonMode::B => (0..cb)
            .map(|n_b| (0..ca).map(|n_a| x.amplitude(n_a, n_b).norm_sqr()).sum())
            .collect(),
    }
}

/// Joint photon-number distribution, row-major over (n_a, n_b).
pub fn joint_distribution(x: &TwoModeState) -> Vec<f64> {
    x.amplitudes().iter().map(|a| a.norm_sqr()).collect()
}

/// Probability that either mode occupies its top `guard_levels` Fock levels.
pub fn truncation_mass(x: &TwoModeState, guard_levels: usize) -> Result<f64> {
    let (ca, cb) = (x.cutoff_a(), x.cutoff_b());
    check_guard(guard_levels, ca.min(cb))?;
    let mut mass = 0.0;
    for n_a in 0..ca {
        for n_b in 0..cb {
            if n_a >= ca - guard_levels || n_b >= cb - guard_levels {
                mass += x.amplitude(n_a, n_b).norm_sqr();
            }
        }
    }
    Ok(mass)
}

/// Same check on a composite-space state.
pub fn truncation_mass_composite(x: &StateVector, guard_levels: usize) -> Result<f64> {
    let spec = x.spec();
    check_guard(guard_levels, spec.cutoff_a().min(spec.cutoff_b()))?;
    Ok(x.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let (n_a, n_b, _) = spec.unpack(*i);
            n_a >= spec.cutoff_a() - guard_levels || n_b >= spec.cutoff_b() - guard_levels
        })
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

fn check_guard(guard_levels: usize, min_cutoff: usize) -> Result<()> {
    if guard_levels == 0 || guard_levels >= min_cutoff {
        return Err(Error::InvalidArgument(format!(
            "guard levels must lie in 1..{min_cutoff}, got {guard_levels}"
        )));
    }
    Ok(())
}

/// Von Neumann entropy (bits) of the mode-a reduced state, from the
/// singular values of the amplitude matrix. Singular values below the
/// floor are dropped; 0·log 0 counts as 0.
pub fn schmidt_entropy(x: &TwoModeState) -> f64 {
    let svs = singular_values(x);
    let mut entropy = 0.0;
    for sv in svs {
        if sv < tol::SCHMIDT_SV_FLOOR {
            continue;
        }
        let p = sv * sv;
        entropy -= p * p.log2();
    }
    entropy.max(0.0)
}

/// Singular values of the (cutoff_a × cutoff_b) amplitude matrix by
/// one-sided Jacobi rotations on the columns.
fn singular_values(x: &TwoModeState) -> Vec<f64> {
    let (rows, cols) = (x.cutoff_a(), x.cutoff_b());
    // columns of the amplitude matrix, indexed by n_b
    let mut col: Vec<Vec<C64>> = (0..cols)
        .map(|n_b| (0..rows).map(|n_a| x.amplitude(n_a, n_b)).collect())
        .collect();
    let max_sweeps = 60;
    let eps = 1e-14;
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let app: f64 = col[p].iter().map(|v| v.norm_sqr()).sum();
                let aqq: f64 = col[q].iter().map(|v| v.norm_sqr()).sum();
                let apq: C64 = col[p].iter().zip(col[q].iter()).map(|(u, v)| u.conj() * v).sum();
                let apq_mag = apq.norm();
                if apq_mag <= eps * (app * aqq).sqrt().max(1e-300) {
                    continue;
                }
                off = off.max(apq_mag);
                // rotate the phase of column q so the cross term is real,
                // then apply the classic two-sided angle on the pair
                let phase = apq / apq_mag;
                let tau = (aqq - app) / (2.0 * apq_mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let vp = col[p][i];
                    let vq = col[q][i] * phase.conj();
                    col[p][i] = vp * c - vq * s;
                    col[q][i] = vp * s + vq * c;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut svs: Vec<f64> = col
        .iter()
        .map(|c_| c_.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    svs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    svs
}
