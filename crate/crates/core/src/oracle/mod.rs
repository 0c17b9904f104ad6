//! Independent numerical verification of the closed forms.
//!
//! Nothing in this module knows the spectral formulas: energies come out
//! of a truncated-basis matrix diagonalization, separable bounds out of
//! an alternating minimization over product states, and the
//! mean-particle-number bound out of a brute-force scan over number
//! distributions. Agreement with the analytic modules is what the
//! `verify` command and the acceptance suite check.
//!
//! Matrices are stored dense and the desk-scale budget
//! [`MAX_DENSE_ROWS`] is enforced rather than worked around: the oracle
//! exists to validate closed forms at small `N`, not to scale.

mod alternating;
mod basis;
mod lanczos;

pub use alternating::{alternating_separability_solver, SeparabilitySolution};
pub use basis::build_hamiltonian_matrix;
pub use lanczos::{smallest_eigenpair, smallest_eigenvalue};

use nalgebra::DMatrix;

use crate::fockspace::NumberDistribution;
use crate::model::EnsembleSpec;
use crate::{closedform, Error, Result};

/// Hard cap on dense matrix rows (`d^N` for the product basis).
pub const MAX_DENSE_ROWS: usize = 20_000;

/// Knobs of the truncated-basis oracle.
///
/// `site_dim` is the per-site Hermite basis size `d`; the product space
/// has `d^N` rows. `basis_scale` optionally overrides the argument scale
/// `γ` of the site basis functions `h⁽ⁿ⁾(γξ)`; by default `γ⁴` is the
/// geometric mean of the squared normal-mode frequencies,
/// `(1+NR)^((N−1)/N)`, which keeps the truncation error orders of
/// magnitude below the budgeted matrix sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedBasisConfig {
    pub site_dim: usize,
    pub tol: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub basis_scale: Option<f64>,
}

impl Default for TruncatedBasisConfig {
    fn default() -> Self {
        Self { site_dim: 16, tol: 1e-10, max_iterations: 5000, restarts: 8, basis_scale: None }
    }
}

impl TruncatedBasisConfig {
    pub fn with_site_dim(site_dim: usize) -> Self {
        Self { site_dim, ..Self::default() }
    }

    /// The basis argument scale `γ` actually used for `spec`.
    pub fn effective_basis_scale(&self, spec: &EnsembleSpec) -> f64 {
        self.basis_scale.unwrap_or_else(|| {
            let n = spec.n_f64();
            (1.0 + n * spec.coupling_ratio()).powf((n - 1.0) / (4.0 * n))
        })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.site_dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "site basis dimension must be at least 2, got {}",
                self.site_dim
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if let Some(g) = self.basis_scale {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InvalidParameter(format!("basis scale must be positive, got {g}")));
            }
        }
        Ok(())
    }
}

/// The potential quadratic form `(1+NR)·Id − R·11ᵀ` (optionally
/// restricted to one block of a partition), with unit kinetic
/// coefficient: `η = −∇ᵀ∇/2 + ξᵀAξ/2`.
///
/// Rotating into the all-ones direction plus its orthonormal completion
/// diagonalizes `A`, exposing the squared mode frequencies — `1+(N−M)R`
/// along the block's center of mass (`M` the block size) and `1+NR` in
/// every perpendicular direction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    matrix: DMatrix<f64>,
}

impl QuadraticForm {
    /// The full `N×N` form of the ensemble.
    pub fn full(spec: &EnsembleSpec) -> Self {
        Self::block(spec, spec.n_particles())
    }

    /// Restriction to a block of `block_size` particles inside the
    /// `N`-particle ensemble.
    pub fn block(spec: &EnsembleSpec, block_size: u64) -> Self {
        let n = spec.n_f64();
        let r = spec.coupling_ratio();
        let m = block_size as usize;
        let mut a = DMatrix::from_element(m, m, -r);
        for i in 0..m {
            a[(i, i)] += 1.0 + n * r;
        }
        Self { matrix: a }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Squared normal-mode frequencies via the deterministic rotation
    /// into the all-ones/completion basis. Panics if the rotation fails
    /// to diagonalize, which would mean the form is not of the expected
    /// shape.
    pub fn mode_frequencies_squared(&self) -> Vec<f64> {
        let m = self.matrix.nrows();
        let rows = closedform::orthonormal_completion(m);
        let q = DMatrix::from_fn(m, m, |i, j| rows[i][j]);
        let rotated = &q * &self.matrix * q.transpose();
        let scale = rotated.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    assert!(
                        rotated[(i, j)].abs() <= 1e-10 * scale,
                        "rotation left an off-diagonal entry: {}",
                        rotated[(i, j)]
                    );
                }
            }
        }
        (0..m).map(|i| rotated[(i, i)]).collect()
    }
}

/// Brute-force minimization of `Σ f(N) p_N` at fixed mean over all
/// distributions supported on at most three points of `0..=n_max`
/// (`n_max` implied by `f.len() − 1`).
///
/// Two-point supports are solved exactly from the linear constraints;
/// three-point supports are scanned on a probability grid with
/// `grid_resolution` steps for the free weight. Returns the best
/// distribution found and its value.
pub fn brute_force_distribution_min(
    f: &[f64],
    mean: f64,
    grid_resolution: usize,
) -> Result<(NumberDistribution, f64)> {
    if f.is_empty() {
        return Err(Error::InvalidParameter("need at least one sector value".into()));
    }
    let n_max = f.len() - 1;
    if !mean.is_finite() || mean < 0.0 || mean > n_max as f64 {
        return Err(Error::InfeasibleMean { mean, n_max: n_max as u64 });
    }
    let mut best_value = f64::INFINITY;
    let mut best_support: Vec<(u64, f64)> = Vec::new();
    {
        let mut consider = |value: f64, support: &[(u64, f64)]| {
            if value < best_value {
                best_value = value;
                best_support = support.to_vec();
            }
        };
        if mean.fract() == 0.0 {
            let m = mean as usize;
            consider(f[m], &[(m as u64, 1.0)]);
        }
        for a in 0..=n_max {
            if a as f64 > mean {
                break;
            }
            for b in (a + 1)..=n_max {
                if (b as f64) < mean {
                    continue;
                }
                let p_a = (b as f64 - mean) / (b - a) as f64;
                let p_b = 1.0 - p_a;
                consider(p_a * f[a] + p_b * f[b], &[(a as u64, p_a), (b as u64, p_b)]);
            }
        }
        let grid = grid_resolution.max(1);
        for a in 0..n_max.saturating_sub(1) {
            for b in (a + 1)..n_max {
                for c in (b + 1)..=n_max {
                    for k in 0..=grid {
                        let p_a = k as f64 / grid as f64;
                        let p_c = (mean - a as f64 * p_a - b as f64 * (1.0 - p_a))
                            / (c as f64 - b as f64);
                        let p_b = 1.0 - p_a - p_c;
                        if p_b < 0.0 || p_c < 0.0 {
                            continue;
                        }
                        consider(
                            p_a * f[a] + p_b * f[b] + p_c * f[c],
                            &[(a as u64, p_a), (b as u64, p_b), (c as u64, p_c)],
                        );
                    }
                }
            }
        }
    }
    if best_support.is_empty() {
        return Err(Error::InfeasibleMean { mean, n_max: n_max as u64 });
    }
    // Drop numerically zero weights before validation.
    best_support.retain(|&(_, p)| p > 0.0);
    Ok((NumberDistribution::new(best_support)?, best_value))
}
