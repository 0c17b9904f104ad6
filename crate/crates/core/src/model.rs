//! Physical parameters, natural units, and partition bookkeeping.
//!
//! All numerical work downstream happens in the natural units of the
//! trap: lengths in `u_x = √(ħ/mΩ)`, energies in `u_E = ħΩ`,
//! temperatures in `u_T = ħΩ/k`. SI quantities appear only here, in the
//! conversion from [`PhysicalParams`] to an [`EnsembleSpec`].
//!
//! Every type in this module is an immutable value and every operation a
//! pure function; they can be shared freely across threads.

use crate::{Error, Result};

/// Reduced Planck constant in J·s (2019 SI exact value).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant in J/K (2019 SI exact value).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Laboratory-frame description of the trap and the pairwise coupling.
///
/// `mass` (kg) and `trap_frequency` (rad/s) set the external harmonic
/// confinement; `interaction` (N/m) is the spring constant of the
/// quadratic pair coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mass: f64,
    pub trap_frequency: f64,
    pub interaction: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, trap_frequency: f64, interaction: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !(trap_frequency > 0.0) || !trap_frequency.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "trap frequency must be positive, got {trap_frequency}"
            )));
        }
        if !(interaction >= 0.0) || !interaction.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interaction constant must be nonnegative, got {interaction}"
            )));
        }
        Ok(Self { mass, trap_frequency, interaction })
    }

    /// Dimensionless coupling ratio `R = κ/(mΩ²)`, the interaction
    /// strength relative to the trap stiffness.
    pub fn coupling_ratio(&self) -> f64 {
        self.interaction / (self.mass * self.trap_frequency * self.trap_frequency)
    }

    /// The characteristic length, energy, and temperature of the trap.
    pub fn natural_units(&self) -> UnitSystem {
        let energy = HBAR * self.trap_frequency;
        UnitSystem {
            length: (HBAR / (self.mass * self.trap_frequency)).sqrt(),
            energy,
            temperature: energy / BOLTZMANN,
        }
    }

    /// Bundle these parameters with a particle count into the
    /// dimensionless description used by the rest of the crate.
    pub fn ensemble(&self, n_particles: u64) -> Result<EnsembleSpec> {
        EnsembleSpec::new(n_particles, self.coupling_ratio())
    }
}

/// Natural units of the trap: `u_x = √(ħ/mΩ)`, `u_E = ħΩ`, `u_T = u_E/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    /// Length unit `u_x` in meters.
    pub length: f64,
    /// Energy unit `u_E` in joules.
    pub energy: f64,
    /// Temperature unit `u_T` in kelvin.
    pub temperature: f64,
}

/// Dimensionless description of the ensemble: particle count `N` and
/// coupling ratio `R`.
///
/// `R = 0` is a noninteracting system; `R ≪ 1`, `R ≈ 1`, and `R ≫ 1` are
/// the weak, balanced, and strong coupling regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    n_particles: u64,
    coupling_ratio: f64,
}

impl EnsembleSpec {
    pub fn new(n_particles: u64, coupling_ratio: f64) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::InvalidParameter("particle count must be at least 1".into()));
        }
        if !(coupling_ratio >= 0.0) || !coupling_ratio.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling ratio must be nonnegative, got {coupling_ratio}"
            )));
        }
        Ok(Self { n_particles, coupling_ratio })
    }

    pub fn n_particles(&self) -> u64 {
        self.n_particles
    }

    /// `N` as a float, for use inside the closed-form expressions.
    pub fn n_f64(&self) -> f64 {
        self.n_particles as f64
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.coupling_ratio
    }
}

/// A split of the particle indices `{1, …, N}` into `K` disjoint,
/// nonempty blocks.
///
/// A state is called separable *with respect to a partition* when it
/// factorizes across the blocks; the trivial partition (`K = 1`) puts no
/// restriction at all, while the full partition (`K = N`) demands a
/// product over every particle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: u64,
    blocks: Vec<Vec<u64>>,
}

impl Partition {
    /// Validate `blocks` as a set partition of `{1, …, n}`. Indices are
    /// 1-based; members of each block are sorted internally so that
    /// derived quantities do not depend on listing order.
    pub fn new(n: u64, blocks: Vec<Vec<u64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("cannot partition an empty ensemble".into()));
        }
        let mut seen = vec![false; n as usize];
        let mut sorted_blocks = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {} is empty", b + 1)));
            }
            let mut block = block;
            block.sort_unstable();
            for &i in &block {
                if i == 0 || i > n {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} out of range 1..={n}"
                    )));
                }
                if seen[(i - 1) as usize] {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} appears in more than one block"
                    )));
                }
                seen[(i - 1) as usize] = true;
            }
            sorted_blocks.push(block);
        }
        if let Some(missing) = seen.iter().position(|covered| !covered) {
            return Err(Error::InvalidPartition(format!(
                "index {} is not covered by any block",
                missing + 1
            )));
        }
        Ok(Self { n, blocks: sorted_blocks })
    }

    /// The one-block partition `{{1, …, n}}`.
    pub fn trivial(n: u64) -> Result<Self> {
        Self::new(n, vec![(1..=n).collect()])
    }

    /// The finest partition `{{1}, …, {n}}`.
    pub fn full(n: u64) -> Result<Self> {
        Self::new(n, (1..=n).map(|i| vec![i]).collect())
    }

    /// `k` contiguous blocks of `n/k` particles each; `k` must divide `n`.
    pub fn equal_blocks(n: u64, k: u64) -> Result<Self> {
        if k == 0 || n % k != 0 {
            return Err(Error::InvalidPartition(format!(
                "cannot split {n} particles into {k} equal blocks"
            )));
        }
        let size = n / k;
        Self::new(n, (0..k).map(|b| (b * size + 1..=(b + 1) * size).collect()).collect())
    }

    pub fn n_particles(&self) -> u64 {
        self.n
    }

    /// Number of blocks `K`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The blocks, each sorted ascending, with 1-based indices.
    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.len() as u64).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() as u64 == self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_ratio_examples() {
        let m = 2.3e-26;
        let omega = 5.0e5;
        assert_eq!(PhysicalParams::new(m, omega, 0.0).unwrap().coupling_ratio(), 0.0);
        let balanced = PhysicalParams::new(m, omega, m * omega * omega).unwrap();
        assert!((balanced.coupling_ratio() - 1.0).abs() < 1e-15);
        let fig2 = PhysicalParams::new(m, omega, 1.5 * m * omega * omega).unwrap();
        assert!((fig2.coupling_ratio() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_mass_or_frequency() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -2.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, -1.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn natural_units_identities() {
        // mΩ = ħ makes the length unit exactly 1.
        let p = PhysicalParams::new(HBAR / 3.0, 3.0, 0.0).unwrap();
        assert!((p.natural_units().length - 1.0).abs() < 1e-12);

        let q = PhysicalParams::new(1.7e-27, 8.2e4, 3.0e-9).unwrap();
        let u = q.natural_units();
        assert!((u.temperature * BOLTZMANN - u.energy).abs() <= 1e-15 * u.energy);

        // Doubling Ω doubles u_E and shrinks u_x by 1/√2.
        let q2 = PhysicalParams::new(1.7e-27, 2.0 * 8.2e4, 3.0e-9).unwrap();
        let u2 = q2.natural_units();
        assert!((u2.energy / u.energy - 2.0).abs() < 1e-12);
        assert!((u2.length / u.length - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn partition_constructors() {
        let t = Partition::trivial(3).unwrap();
        assert_eq!(t.num_blocks(), 1);
        assert!(t.is_trivial());

        let f = Partition::full(3).unwrap();
        assert_eq!(f.num_blocks(), 3);
        assert!(f.is_full());

        let halves = Partition::equal_blocks(1024, 2).unwrap();
        assert_eq!(halves.block_sizes(), vec![512, 512]);
    }

    #[test]
    fn partition_rejects_malformed_blocks() {
        // Overlap.
        assert!(Partition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        // Missing index.
        assert!(Partition::new(3, vec![vec![1], vec![3]]).is_err());
        // Empty block.
        assert!(Partition::new(3, vec![vec![1, 2, 3], vec![]]).is_err());
        // Out of range.
        assert!(Partition::new(3, vec![vec![1, 2, 3, 4]]).is_err());
        assert!(Partition::new(3, vec![vec![0], vec![1, 2, 3]]).is_err());
        // Equal blocks that do not divide evenly.
        assert!(Partition::equal_blocks(10, 3).is_err());
    }

    #[test]
    fn single_particle_ensemble_is_valid() {
        let spec = EnsembleSpec::new(1, 0.7).unwrap();
        assert_eq!(spec.n_particles(), 1);
        assert!(EnsembleSpec::new(0, 1.0).is_err());
        assert!(EnsembleSpec::new(2, -0.1).is_err());
    }
}
