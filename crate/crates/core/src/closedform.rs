//! Exact spectra, separable spectra, and wavefunctions of the coupled
//! ensemble.
//!
//! For a partition of the `N` particles into blocks `I_1, …, I_K` of
//! sizes `N_j`, the energy restricted to states that factorize across the
//! blocks is, in units of `u_E`,
//!
//! ```text
//! E = Σ_j √(1+NR) (|n⊥_j|₁ + (N_j−1)/2)
//!   + Σ_j √(1+(N−N_j)R) (n∥_j + 1/2)
//! ```
//!
//! with one parallel quantum number `n∥_j` per block (the block's
//! center-of-mass direction) and `N_j − 1` perpendicular quantum numbers.
//! The trivial partition (`K = 1`) reproduces the ordinary spectrum; the
//! full partition (`K = N`) gives the spectrum over completely separable
//! states, `√(1+(N−1)R) Σ_j (n_j + 1/2)`.
//!
//! The corresponding eigenfunctions are products of Hermite functions in
//! block-local parallel/perpendicular coordinates with argument scales
//! `⁴√(1+(N−N_j)R)` and `⁴√(1+NR)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::model::{EnsembleSpec, Partition};
use crate::par;
use crate::{Error, Result};

/// Default cap on the Hermite recurrence order.
pub const DEFAULT_MAX_HERMITE_ORDER: usize = 512;

/// Hermite function `h⁽ⁿ⁾(ξ)`, the `n`-th eigenfunction of
/// `(ξ² − ∂_ξ²)/2`, normalized to unit L² norm.
///
/// Evaluated with the ascending three-term recurrence
/// `h⁽ⁿ⁺¹⁾ = (√2 ξ h⁽ⁿ⁾ − √n h⁽ⁿ⁻¹⁾)/√(n+1)`, which is stable to orders
/// of several hundred, unlike the factorial-laden defining formula.
pub fn hermite_eval(n: usize, xi: f64) -> Result<f64> {
    hermite_eval_capped(n, xi, DEFAULT_MAX_HERMITE_ORDER)
}

/// [`hermite_eval`] with an explicit order cap.
pub fn hermite_eval_capped(n: usize, xi: f64, max_order: usize) -> Result<f64> {
    if n > max_order {
        return Err(Error::HermiteOrderOverflow { order: n, max: max_order });
    }
    let gauss = (-xi * xi / 2.0).exp();
    let mut prev = PI.powf(-0.25) * gauss; // h⁽⁰⁾
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2f64.sqrt() * xi * PI.powf(-0.25) * gauss; // h⁽¹⁾
    for k in 1..n {
        let next = (2f64.sqrt() * xi * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Ground-state energy `(1 + (N−1)√(1+NR))/2` of the `N`-particle
/// system, in units of `u_E`.
///
/// Takes `n` as a float because the mean-particle-number machinery mixes
/// neighboring integer sectors.
pub fn standard_ground_energy(n: f64, r: f64) -> f64 {
    0.5 * (1.0 + (n - 1.0) * (1.0 + n * r).sqrt())
}

/// Minimal energy `(N/2)√(1+(N−1)R)` attainable by fully separable
/// states, in units of `u_E`. This is the witness bound for full
/// separability. The empty sector `N = 0` carries zero energy (the
/// radicand is meaningless there).
pub fn fully_separable_min_energy(n: f64, r: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    0.5 * n * (1.0 + (n - 1.0) * r).sqrt()
}

/// Which spectral family an energy belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyKind {
    /// Ordinary eigenvalue (trivial partition).
    Standard,
    /// Restricted to product states over a nontrivial partition.
    PartitionSeparable,
    /// Restricted to products over every particle (full partition).
    FullySeparable,
}

impl EnergyKind {
    fn for_partition(partition: &Partition) -> Self {
        if partition.is_trivial() {
            EnergyKind::Standard
        } else if partition.is_full() {
            EnergyKind::FullySeparable
        } else {
            EnergyKind::PartitionSeparable
        }
    }
}

/// An energy in units of `u_E`, tagged with the spectral family it came
/// from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyValue {
    pub value: f64,
    pub kind: EnergyKind,
}

/// Excitation of a single block: one parallel quantum number and
/// `N_j − 1` perpendicular ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockExcitation {
    pub parallel: u64,
    pub perpendicular: Vec<u64>,
}

/// Excitation label for every block of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcitationLabel {
    blocks: Vec<BlockExcitation>,
}

impl ExcitationLabel {
    pub fn new(blocks: Vec<BlockExcitation>) -> Self {
        Self { blocks }
    }

    /// The all-zeros label compatible with `partition`.
    pub fn ground(partition: &Partition) -> Self {
        Self {
            blocks: partition
                .block_sizes()
                .iter()
                .map(|&m| BlockExcitation { parallel: 0, perpendicular: vec![0; (m - 1) as usize] })
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[BlockExcitation] {
        &self.blocks
    }

    fn validate_for(&self, partition: &Partition) -> Result<()> {
        let sizes = partition.block_sizes();
        if self.blocks.len() != sizes.len() {
            return Err(Error::LabelMismatch(format!(
                "label has {} blocks, partition has {}",
                self.blocks.len(),
                sizes.len()
            )));
        }
        for (j, (exc, &m)) in self.blocks.iter().zip(&sizes).enumerate() {
            if exc.perpendicular.len() as u64 != m - 1 {
                return Err(Error::LabelMismatch(format!(
                    "block {} has {} perpendicular quantum numbers, expected {}",
                    j + 1,
                    exc.perpendicular.len(),
                    m - 1
                )));
            }
        }
        Ok(())
    }
}

fn check_partition_matches(spec: &EnsembleSpec, partition: &Partition) -> Result<()> {
    if spec.n_particles() != partition.n_particles() {
        return Err(Error::InvalidPartition(format!(
            "partition over {} particles used with an ensemble of {}",
            partition.n_particles(),
            spec.n_particles()
        )));
    }
    Ok(())
}

/// Energy of the product-state level `label` of the partition-restricted
/// spectrum, in units of `u_E`.
pub fn partition_energy(
    spec: &EnsembleSpec,
    partition: &Partition,
    label: &ExcitationLabel,
) -> Result<EnergyValue> {
    check_partition_matches(spec, partition)?;
    label.validate_for(partition)?;
    let n = spec.n_f64();
    let r = spec.coupling_ratio();
    let perp_freq = (1.0 + n * r).sqrt();
    let mut value = 0.0;
    for (exc, &m) in label.blocks.iter().zip(&partition.block_sizes()) {
        let m = m as f64;
        let par_freq = (1.0 + (n - m) * r).sqrt();
        let perp_total: u64 = exc.perpendicular.iter().sum();
        value += perp_freq * (perp_total as f64 + (m - 1.0) / 2.0);
        value += par_freq * (exc.parallel as f64 + 0.5);
    }
    Ok(EnergyValue { value, kind: EnergyKind::for_partition(partition) })
}

/// Minimal energy over states separable with respect to `partition`:
/// `(1/2) Σ_j √(1+(N−N_j)R) + (1/2) Σ_j (N_j−1) √(1+NR)`, in `u_E`.
///
/// Equals [`partition_energy`] at the all-zeros label. Refining the
/// partition can only raise this bound.
pub fn partition_min_energy(spec: &EnsembleSpec, partition: &Partition) -> Result<EnergyValue> {
    check_partition_matches(spec, partition)?;
    let n = spec.n_f64();
    let r = spec.coupling_ratio();
    let perp_freq = (1.0 + n * r).sqrt();
    let mut value = 0.0;
    for &m in &partition.block_sizes() {
        let m = m as f64;
        value += 0.5 * (1.0 + (n - m) * r).sqrt();
        value += 0.5 * (m - 1.0) * perp_freq;
    }
    Ok(EnergyValue { value, kind: EnergyKind::for_partition(partition) })
}

/// The `count` lowest levels of the partition-restricted spectrum, with
/// multiplicity, ascending.
///
/// The spectrum is a lattice `E_min + Σ_m c_m k_m` over nonnegative
/// integer occupations `k_m` of the `N` block modes, so the levels are
/// generated exactly by a best-first search over occupation vectors
/// (each vector reached once, via nondecreasing mode index).
pub fn enumerate_levels(
    spec: &EnsembleSpec,
    partition: &Partition,
    count: usize,
) -> Result<Vec<EnergyValue>> {
    check_partition_matches(spec, partition)?;
    if count == 0 {
        return Err(Error::InvalidParameter("level count must be at least 1".into()));
    }
    let n = spec.n_f64();
    let r = spec.coupling_ratio();
    let perp_cost = (1.0 + n * r).sqrt();
    let mut costs = Vec::new();
    for &m in &partition.block_sizes() {
        costs.push((1.0 + (n - m as f64) * r).sqrt());
        costs.extend(std::iter::repeat(perp_cost).take((m - 1) as usize));
    }
    let base = partition_min_energy(spec, partition)?;

    struct Node {
        value: f64,
        occupation: Vec<u32>,
        last_raised: usize,
    }
    impl PartialEq for Node {
        fn eq(&self, other: &Self) -> bool {
            self.value == other.value
        }
    }
    impl Eq for Node {}
    impl PartialOrd for Node {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Node {
        fn cmp(&self, other: &Self) -> Ordering {
            // Reversed: BinaryHeap is a max-heap, we want the min.
            other.value.total_cmp(&self.value)
        }
    }

    let mut heap = BinaryHeap::new();
    heap.push(Node { value: 0.0, occupation: vec![0; costs.len()], last_raised: 0 });
    let mut levels = Vec::with_capacity(count);
    while levels.len() < count {
        let node = heap.pop().expect("occupation lattice is infinite");
        levels.push(EnergyValue { value: base.value + node.value, kind: base.kind });
        for idx in node.last_raised..costs.len() {
            let mut occupation = node.occupation.clone();
            occupation[idx] += 1;
            heap.push(Node { value: node.value + costs[idx], occupation, last_raised: idx });
        }
    }
    Ok(levels)
}

/// Deterministic orthonormal basis of `R^m` whose first vector is the
/// normalized all-ones direction.
///
/// The remaining `m − 1` vectors come from Gram–Schmidt on the standard
/// basis, smallest index first, so the perpendicular coordinates used in
/// wavefunction evaluation are reproducible. Energies never depend on
/// this choice.
pub fn orthonormal_completion(m: usize) -> Vec<Vec<f64>> {
    assert!(m >= 1, "completion needs at least one dimension");
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0 / (m as f64).sqrt(); m]];
    let mut i = 0;
    while rows.len() < m {
        let mut w = vec![0.0; m];
        w[i] = 1.0;
        // Two Gram-Schmidt passes keep the basis orthonormal to machine
        // precision.
        for _ in 0..2 {
            for row in &rows {
                let overlap: f64 = row.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wk, rk) in w.iter_mut().zip(row) {
                    *wk -= overlap * rk;
                }
            }
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for wk in &mut w {
                *wk /= norm;
            }
            rows.push(w);
        }
        i += 1;
    }
    rows
}

/// A request to evaluate one separability eigenfunction on a set of
/// position samples.
///
/// Points are in units of `u_x`, one coordinate per particle. By default
/// the amplitudes follow the bare product-of-Hermite-functions form
/// (argument scales only); setting `normalized` multiplies by the
/// analytic factor `∏ scaleᵏ` that makes the function unit-norm.
#[derive(Debug, Clone)]
pub struct WavefunctionQuery {
    pub partition: Partition,
    pub label: ExcitationLabel,
    pub points: Vec<Vec<f64>>,
    pub normalized: bool,
}

/// Evaluate the product wavefunction of `query` at every sample point.
///
/// Within block `j` the coordinates split into the parallel combination
/// `ξ∥_j = Σ_{i∈I_j} ξ_i / √N_j` and an orthonormal completion of the
/// perpendicular subspace; the factors are `h⁽ⁿ⁾` at those coordinates
/// scaled by `⁴√(1+(N−N_j)R)` and `⁴√(1+NR)` respectively.
pub fn wavefunction_eval(query: &WavefunctionQuery, spec: &EnsembleSpec) -> Result<Vec<f64>> {
    check_partition_matches(spec, &query.partition)?;
    query.label.validate_for(&query.partition)?;
    let n_total = spec.n_particles() as usize;
    for (k, p) in query.points.iter().enumerate() {
        if p.len() != n_total {
            return Err(Error::DimensionMismatch(format!(
                "point {} has {} coordinates, expected {}",
                k,
                p.len(),
                n_total
            )));
        }
    }
    let n = spec.n_f64();
    let r = spec.coupling_ratio();
    let perp_scale = (1.0 + n * r).powf(0.25);

    struct BlockEval {
        members: Vec<usize>,
        basis: Vec<Vec<f64>>,
        par_scale: f64,
        parallel: u64,
        perpendicular: Vec<u64>,
    }
    let mut blocks = Vec::with_capacity(query.partition.num_blocks());
    let mut norm = 1.0;
    for (block, exc) in query.partition.blocks().iter().zip(query.label.blocks()) {
        let m = block.len();
        let par_freq_sq = 1.0 + (n - m as f64) * r;
        if query.normalized {
            // Each factor h(c·u) carries norm 1/√c; compensate per
            // direction: √c_par once, √c_perp for each of the m−1 others.
            norm *= par_freq_sq.powf(0.125) * (1.0 + n * r).powf((m as f64 - 1.0) / 8.0);
        }
        blocks.push(BlockEval {
            members: block.iter().map(|&i| (i - 1) as usize).collect(),
            basis: orthonormal_completion(m),
            par_scale: par_freq_sq.powf(0.25),
            parallel: exc.parallel,
            perpendicular: exc.perpendicular.clone(),
        });
    }

    let amplitudes = par::map_collect(query.points.clone(), move |point| {
        let mut amp = norm;
        for block in &blocks {
            let local: Vec<f64> = block.members.iter().map(|&i| point[i]).collect();
            let coord = |row: &[f64]| row.iter().zip(&local).map(|(a, b)| a * b).sum::<f64>();
            let xi_par = coord(&block.basis[0]);
            amp *= hermite_eval(block.parallel as usize, block.par_scale * xi_par)
                .expect("parallel order within cap");
            for (d, &nq) in block.perpendicular.iter().enumerate() {
                let xi_perp = coord(&block.basis[d + 1]);
                amp *= hermite_eval(nq as usize, perp_scale * xi_perp)
                    .expect("perpendicular order within cap");
            }
        }
        amp
    });
    Ok(amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(n: u64, r: f64) -> EnsembleSpec {
        EnsembleSpec::new(n, r).unwrap()
    }

    #[test]
    fn hermite_seeds() {
        // h⁽⁰⁾(0) = π^(−1/4)
        assert_relative_eq!(hermite_eval(0, 0.0).unwrap(), PI.powf(-0.25), max_relative = 1e-14);
        // Odd order vanishes at the origin.
        assert_eq!(hermite_eval(1, 0.0).unwrap(), 0.0);
        assert_eq!(hermite_eval(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn hermite_order_cap() {
        assert!(hermite_eval(512, 0.3).is_ok());
        assert!(matches!(
            hermite_eval(513, 0.3),
            Err(Error::HermiteOrderOverflow { order: 513, max: 512 })
        ));
        assert!(hermite_eval_capped(600, 0.3, 1024).is_ok());
    }

    /// Composite trapezoid on [-12, 12]; for these analytic, rapidly
    /// decaying integrands the rule converges far below 1e-10.
    fn quad(f: impl Fn(f64) -> f64) -> f64 {
        let (a, b, steps) = (-12.0, 12.0, 4800);
        let h = (b - a) / steps as f64;
        let mut sum = 0.5 * (f(a) + f(b));
        for k in 1..steps {
            sum += f(a + k as f64 * h);
        }
        sum * h
    }

    #[test]
    fn hermite_orthonormality_by_quadrature() {
        let h2h3 = quad(|x| hermite_eval(2, x).unwrap() * hermite_eval(3, x).unwrap());
        assert!(h2h3.abs() < 1e-10, "⟨h2|h3⟩ = {h2h3}");
        let h2h2 = quad(|x| hermite_eval(2, x).unwrap().powi(2));
        assert!((h2h2 - 1.0).abs() < 1e-10, "⟨h2|h2⟩ = {h2h2}");
    }

    /// Independent route to h⁽ⁿ⁾: carry the polynomial coefficients of
    /// (ξ−∂)ⁿ applied to the Gaussian. Acting on P(ξ)e^(−ξ²/2) gives
    /// (2ξP − P')e^(−ξ²/2), so the polynomial obeys P_{n+1} = 2ξP_n − P_n'.
    fn hermite_by_definition(n: usize, xi: f64) -> f64 {
        let mut p = vec![1.0f64];
        for _ in 0..n {
            let mut next = vec![0.0; p.len() + 1];
            for (k, &c) in p.iter().enumerate() {
                next[k + 1] += 2.0 * c;
                if k >= 1 {
                    next[k - 1] -= k as f64 * c;
                }
            }
            p = next;
        }
        let poly: f64 = p.iter().rev().fold(0.0, |acc, &c| acc * xi + c);
        let norm = (2f64.powi(n as i32)
            * (1..=n).map(|k| k as f64).product::<f64>()
            * PI.sqrt())
        .sqrt();
        poly * (-xi * xi / 2.0).exp() / norm
    }

    #[test]
    fn hermite_matches_defining_formula() {
        for n in 0..=8 {
            for k in 0..20 {
                let xi = -4.75 + 0.5 * k as f64;
                let by_recurrence = hermite_eval(n, xi).unwrap();
                let by_definition = hermite_by_definition(n, xi);
                assert!(
                    (by_recurrence - by_definition).abs() < 1e-9,
                    "n={n} xi={xi}: {by_recurrence} vs {by_definition}"
                );
            }
        }
    }

    #[test]
    fn bipartite_ground_energies() {
        let s = spec(2, 1.5);
        let trivial = Partition::trivial(2).unwrap();
        let full = Partition::full(2).unwrap();
        let e = partition_energy(&s, &trivial, &ExcitationLabel::ground(&trivial)).unwrap();
        assert_relative_eq!(e.value, 1.5, max_relative = 1e-14);
        assert_eq!(e.kind, EnergyKind::Standard);
        let b = partition_energy(&s, &full, &ExcitationLabel::ground(&full)).unwrap();
        assert_relative_eq!(b.value, 2.5f64.sqrt(), max_relative = 1e-14);
        assert_eq!(b.kind, EnergyKind::FullySeparable);
    }

    #[test]
    fn uncoupled_ground_energy_is_half_per_particle() {
        for n in [1u64, 2, 3, 5] {
            let s = spec(n, 0.0);
            for partition in [Partition::trivial(n).unwrap(), Partition::full(n).unwrap()] {
                let e =
                    partition_energy(&s, &partition, &ExcitationLabel::ground(&partition)).unwrap();
                assert_relative_eq!(e.value, n as f64 / 2.0, max_relative = 1e-14);
            }
        }
        let s = spec(4, 0.0);
        let p = Partition::new(4, vec![vec![1, 3], vec![2, 4]]).unwrap();
        let e = partition_energy(&s, &p, &ExcitationLabel::ground(&p)).unwrap();
        assert_relative_eq!(e.value, 2.0, max_relative = 1e-14);
        assert_eq!(e.kind, EnergyKind::PartitionSeparable);
    }

    #[test]
    fn label_mismatch_is_rejected() {
        let s = spec(3, 1.0);
        let trivial = Partition::trivial(3).unwrap();
        let full = Partition::full(3).unwrap();
        let label_for_full = ExcitationLabel::ground(&full);
        assert!(matches!(
            partition_energy(&s, &trivial, &label_for_full),
            Err(Error::LabelMismatch(_))
        ));
        let bad_perp = ExcitationLabel::new(vec![BlockExcitation {
            parallel: 0,
            perpendicular: vec![0],
        }]);
        assert!(partition_energy(&s, &trivial, &bad_perp).is_err());
        let wrong_n = spec(4, 1.0);
        assert!(partition_energy(&wrong_n, &trivial, &ExcitationLabel::ground(&trivial)).is_err());
    }

    #[test]
    fn min_energy_special_partitions() {
        for (n, r) in [(2u64, 1.5), (3, 0.5), (7, 2.0), (64, 10.0)] {
            let s = spec(n, r);
            let trivial =
                partition_min_energy(&s, &Partition::trivial(n).unwrap()).unwrap().value;
            assert_relative_eq!(
                trivial,
                standard_ground_energy(n as f64, r),
                max_relative = 1e-13
            );
            let full = partition_min_energy(&s, &Partition::full(n).unwrap()).unwrap().value;
            assert_relative_eq!(
                full,
                fully_separable_min_energy(n as f64, r),
                max_relative = 1e-13
            );
        }
    }

    /// Independent check of the two-block minimum: minimize the energy of
    /// a centered block-product Gaussian trial state. Per normal-mode
    /// direction of stiffness λ the trial energy is (s + λ/s)/4; golden
    /// section over each s recovers the optimal √λ/2 without using the
    /// closed form under test.
    #[test]
    fn equal_bipartition_matches_gaussian_trial_minimization() {
        let (n, r) = (4.0, 1.0);
        // Block of size 2 inside N=4: stiffness eigenvalues of the block
        // potential (1+NR)Id − R 11ᵀ are 1+(N−2)R (parallel) and 1+NR.
        let stiffness = [1.0 + (n - 2.0) * r, 1.0 + n * r];
        let golden_min = |lambda: f64| {
            let (mut a, mut b) = (1e-3, 1e3);
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            let f = |s: f64| (s + lambda / s) / 4.0;
            for _ in 0..200 {
                let c = b - phi * (b - a);
                let d = a + phi * (b - a);
                if f(c) < f(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            f(0.5 * (a + b))
        };
        let trial: f64 = 2.0 * stiffness.iter().map(|&l| golden_min(l)).sum::<f64>();
        let s = spec(4, 1.0);
        let p = Partition::equal_blocks(4, 2).unwrap();
        let closed = partition_min_energy(&s, &p).unwrap().value;
        assert_relative_eq!(closed, trial, max_relative = 1e-10);
        assert_relative_eq!(closed, 3f64.sqrt() + 5f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn level_enumeration_examples() {
        let trivial = Partition::trivial(2).unwrap();
        let levels = enumerate_levels(&spec(2, 0.0), &trivial, 3).unwrap();
        let values: Vec<f64> = levels.iter().map(|e| e.value).collect();
        assert_relative_eq!(values[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(values[1], 2.0, max_relative = 1e-14);
        assert_relative_eq!(values[2], 2.0, max_relative = 1e-14);

        let levels = enumerate_levels(&spec(2, 1.5), &trivial, 2).unwrap();
        assert_relative_eq!(levels[0].value, 1.5, max_relative = 1e-14);
        assert_relative_eq!(levels[1].value, 2.5, max_relative = 1e-14);

        let full = Partition::full(2).unwrap();
        let levels = enumerate_levels(&spec(2, 1.5), &full, 3).unwrap();
        let root = 2.5f64.sqrt();
        assert_relative_eq!(levels[0].value, root, max_relative = 1e-14);
        assert_relative_eq!(levels[1].value, 2.0 * root, max_relative = 1e-14);
        // The first excited separable level is doubly degenerate.
        assert_relative_eq!(levels[2].value, 2.0 * root, max_relative = 1e-14);
    }

    /// Degeneracies from the best-first search must match an exhaustive
    /// scan over excitation labels.
    #[test]
    fn level_degeneracies_match_exhaustive_enumeration() {
        for n in 2u64..=4 {
            for partition in [Partition::trivial(n).unwrap(), Partition::full(n).unwrap()] {
                let s = spec(n, 0.7);
                let fast = enumerate_levels(&s, &partition, 10).unwrap();
                // Exhaustive: all occupation vectors with total quanta
                // small enough to cover the first 10 levels.
                let nf = s.n_f64();
                let r = s.coupling_ratio();
                let mut costs = Vec::new();
                for &m in &partition.block_sizes() {
                    costs.push((1.0 + (nf - m as f64) * r).sqrt());
                    for _ in 0..m - 1 {
                        costs.push((1.0 + nf * r).sqrt());
                    }
                }
                let base = partition_min_energy(&s, &partition).unwrap().value;
                let mut all = vec![];
                let cap = 12u32;
                fn rec(costs: &[f64], budget: u32, acc: f64, all: &mut Vec<f64>) {
                    match costs.split_first() {
                        None => all.push(acc),
                        Some((&c, rest)) => {
                            for q in 0..=budget {
                                rec(rest, budget - q, acc + q as f64 * c, all);
                            }
                        }
                    }
                }
                rec(&costs, cap, base, &mut all);
                all.sort_by(f64::total_cmp);
                for (a, b) in fast.iter().zip(&all) {
                    assert_relative_eq!(a.value, *b, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn completion_is_orthonormal() {
        for m in 1..=7 {
            let basis = orthonormal_completion(m);
            assert_eq!(basis.len(), m);
            for (i, u) in basis.iter().enumerate() {
                for (j, v) in basis.iter().enumerate() {
                    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-12, "m={m} i={i} j={j} dot={dot}");
                }
            }
        }
    }

    #[test]
    fn wavefunction_point_values() {
        // Two uncoupled particles in their ground state at the origin:
        // the product of two Gaussian peaks, π^(−1/2).
        let full = Partition::full(2).unwrap();
        let q = WavefunctionQuery {
            partition: full.clone(),
            label: ExcitationLabel::ground(&full),
            points: vec![vec![0.0, 0.0]],
            normalized: true,
        };
        let amp = wavefunction_eval(&q, &spec(2, 0.0)).unwrap();
        assert_relative_eq!(amp[0], 1.0 / PI.sqrt(), max_relative = 1e-13);

        // First perpendicular excitation of the entangled pair vanishes
        // on the diagonal x_A = x_B.
        let trivial = Partition::trivial(2).unwrap();
        let q = WavefunctionQuery {
            partition: trivial,
            label: ExcitationLabel::new(vec![BlockExcitation {
                parallel: 0,
                perpendicular: vec![1],
            }]),
            points: (-5..=5).map(|k| vec![0.4 * k as f64, 0.4 * k as f64]).collect(),
            normalized: false,
        };
        for amp in wavefunction_eval(&q, &spec(2, 1.5)).unwrap() {
            assert!(amp.abs() < 1e-14);
        }
    }

    #[test]
    fn wavefunction_norm_by_quadrature() {
        // 2-D trapezoid on [-9, 9]²; the squared amplitude decays like a
        // Gaussian so the rule is effectively exact.
        let full = Partition::full(2).unwrap();
        let s = spec(2, 1.5);
        let steps = 360;
        let (a, b) = (-9.0, 9.0);
        let h = (b - a) / steps as f64;
        let mut points = Vec::new();
        for i in 0..=steps {
            for j in 0..=steps {
                points.push(vec![a + i as f64 * h, a + j as f64 * h]);
            }
        }
        let q = WavefunctionQuery {
            partition: full.clone(),
            label: ExcitationLabel::ground(&full),
            points,
            normalized: true,
        };
        let amps = wavefunction_eval(&q, &s).unwrap();
        let mut norm = 0.0;
        for i in 0..=steps {
            for j in 0..=steps {
                let w_i = if i == 0 || i == steps { 0.5 } else { 1.0 };
                let w_j = if j == 0 || j == steps { 0.5 } else { 1.0 };
                norm += w_i * w_j * amps[i * (steps + 1) + j].powi(2);
            }
        }
        norm *= h * h;
        assert!((norm - 1.0).abs() < 1e-8, "norm = {norm}");
    }

    #[test]
    fn wavefunction_rejects_bad_points() {
        let full = Partition::full(2).unwrap();
        let q = WavefunctionQuery {
            partition: full.clone(),
            label: ExcitationLabel::ground(&full),
            points: vec![vec![0.0, 0.0, 0.0]],
            normalized: false,
        };
        assert!(matches!(
            wavefunction_eval(&q, &spec(2, 1.0)),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
