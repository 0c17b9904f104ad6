//! Entanglement visibility: the contrast between a measured expectation
//! value and the corresponding separable bound.
//!
//! For a positive-semidefinite observable with separable bound
//! `λ_min^(sep)` and measured expectation `⟨L⟩`, the visibility is
//!
//! ```text
//! V = (λ_min^(sep) − ⟨L⟩) / (λ_min^(sep) + ⟨L⟩)
//! ```
//!
//! `V > 0` certifies entanglement; its magnitude tells how much detector
//! resolution the certification has to spare. `V ≤ 0` means this
//! particular observable detects nothing — which never implies
//! separability.
//!
//! The observable throughout this crate is the total energy, so the
//! maximal visibility is reached by the ground state and comes out in
//! closed form as a function of `(N, R)`.

use crate::closedform::{fully_separable_min_energy, standard_ground_energy};
use crate::model::{EnsembleSpec, Partition};
use crate::{closedform, Error, Result};

/// Expectation value, separable bound, and the resulting visibility, all
/// energies in `u_E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityReport {
    pub expectation: f64,
    pub separable_bound: f64,
    pub visibility: f64,
}

impl VisibilityReport {
    /// `true` when the report certifies entanglement.
    pub fn detects_entanglement(&self) -> bool {
        self.visibility > 0.0
    }
}

/// Visibility of a measured `expectation` against a separable bound.
///
/// Requires `expectation ≥ 0` and `bound > 0`; the result is invariant
/// under a common positive rescaling of both energies.
pub fn visibility(expectation: f64, separable_bound: f64) -> Result<VisibilityReport> {
    if !(separable_bound > 0.0) || !(expectation >= 0.0) {
        return Err(Error::UndefinedVisibility { expectation, bound: separable_bound });
    }
    Ok(VisibilityReport {
        expectation,
        separable_bound,
        visibility: (separable_bound - expectation) / (separable_bound + expectation),
    })
}

/// Maximal visibility of the energy witness for `N` particles at
/// coupling `R`: the ground state against the fully separable bound.
pub fn max_visibility(spec: &EnsembleSpec) -> VisibilityReport {
    let n = spec.n_f64();
    let r = spec.coupling_ratio();
    visibility(standard_ground_energy(n, r), fully_separable_min_energy(n, r))
        .expect("both energies positive for N ≥ 1")
}

/// The maximal-visibility formula evaluated at a real-valued particle
/// number.
///
/// This is the ad hoc continuous extension obtained by inserting a
/// noninteger `n` directly into the fixed-`N` formula. It is what the
/// optimum in [`optimal_particle_number`] extremizes; the physically
/// consistent treatment of noninteger means lives in
/// [`crate::fockspace::mean_n_visibility`].
pub fn max_visibility_interpolated(n: f64, r: f64) -> f64 {
    let ground = standard_ground_energy(n, r);
    let bound = fully_separable_min_energy(n, r);
    (bound - ground) / (bound + ground)
}

/// Visibility of the ground state against the bound for states separable
/// across `partition`.
///
/// The trivial partition gives zero (the bound is the ground energy
/// itself); the full partition reproduces [`max_visibility`]; refining a
/// partition can only increase the value.
pub fn partition_visibility(spec: &EnsembleSpec, partition: &Partition) -> Result<VisibilityReport> {
    let bound = closedform::partition_min_energy(spec, partition)?;
    visibility(standard_ground_energy(spec.n_f64(), spec.coupling_ratio()), bound.value)
}

/// The real-valued particle number `(1 + 2R + √(5+4R))/(2R)` that
/// maximizes the visibility at fixed coupling `R > 0`.
///
/// Diverges as `R → 0` (reported as [`Error::DivergentOptimum`]) and
/// approaches 1 for strong coupling. The physical optimum over integer
/// particle numbers is one of the two integers bracketing this root.
pub fn optimal_particle_number(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "coupling ratio must be nonnegative, got {r}"
        )));
    }
    if r == 0.0 {
        return Err(Error::DivergentOptimum);
    }
    Ok((1.0 + 2.0 * r + (5.0 + 4.0 * r).sqrt()) / (2.0 * r))
}

/// Reference limits of the maximal visibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticLimits {
    /// `lim_{R→∞} V_max = (√N − √(N−1))²` at fixed `N`.
    pub strong_coupling: f64,
    /// `lim_{N→∞} V_max = 0` at fixed `R`: no entanglement is detectable
    /// by the energy witness in the macroscopic limit.
    pub macroscopic: f64,
}

/// Strong-coupling and macroscopic limits for an `N`-particle ensemble.
pub fn asymptotic_limits(n_particles: u64) -> AsymptoticLimits {
    let n = n_particles as f64;
    let root = n.sqrt() - (n - 1.0).sqrt();
    AsymptoticLimits { strong_coupling: root * root, macroscopic: 0.0 }
}

/// The bipartite strong-coupling limit `3 − 2√2 ≈ 0.1716`.
pub fn bipartite_strong_coupling_limit() -> f64 {
    3.0 - 2.0 * std::f64::consts::SQRT_2
}
