//! Entanglement witnesses for ensembles of pairwise-coupled harmonic
//! oscillators.
//!
//! The model is a trap of `N` identical particles in a common quadratic
//! potential, every pair coupled by a quadratic interaction of strength
//! `κ`. In the natural units of the trap the whole problem is governed by
//! two numbers: the particle count `N` and the dimensionless coupling
//! ratio `R = κ/(mΩ²)`. The Hamiltonian separates into one center-of-mass
//! mode of unit frequency and `N − 1` relative modes of frequency
//! `√(1 + NR)`, so both the ordinary spectrum and the spectrum restricted
//! to product (separable) states are available in closed form.
//!
//! An energy measurement then acts as an entanglement witness: the ground
//! state energy lies strictly below the minimum reachable by any separable
//! state whenever `R > 0`, and the contrast between the two — the
//! *entanglement visibility* — quantifies how well a detector of finite
//! resolution can certify the entanglement.
//!
//! Module map:
//!
//! - [`model`] — physical parameters, natural units, particle partitions.
//! - [`closedform`] — exact spectra, separable spectra, and wavefunctions.
//! - [`visibility`] — entanglement visibility, optima, asymptotic limits.
//! - [`fockspace`] — bounds for fluctuating particle number at fixed mean.
//! - [`thermal`] — grand-canonical thermal states and their visibility.
//! - [`oracle`] — independent numerical verification: truncated-basis
//!   diagonalization, alternating product-state minimization, brute-force
//!   convex minimization.
//!
//! Everything works in the natural units `u_x = √(ħ/mΩ)`, `u_E = ħΩ`,
//! `u_T = ħΩ/k`; conversion from SI parameters happens once, in [`model`].
//!
//! With the default `parallel` feature, grid sweeps and oracle restarts
//! are data-parallel via rayon (thread count controlled by
//! `RAYON_NUM_THREADS`); without it every computation runs sequentially
//! with identical results.

pub mod closedform;
mod error;
pub mod fockspace;
pub mod model;
pub mod oracle;
mod par;
pub mod thermal;
pub mod visibility;

pub use error::{Error, Result};
