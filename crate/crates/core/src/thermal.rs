//! Grand-canonical thermal state of the interacting ensemble.
//!
//! The state is `ρ ∝ exp(−α N̂ − β Ĥ)` with `α = −μ/(kT)` and
//! `β = 1/(kT)`. Summing the geometric ladder of every sector gives the
//! partition function as a series over particle numbers,
//!
//! ```text
//! Z = Σ_N Γ_N,   Γ_N = e^(−αN) / (2 sinh(β/2)) ·
//!                      (2 sinh(β √(1+NR)/2))^(−(N−1))
//! ```
//!
//! (energies in `u_E`, so `β` here is `u_E/(kT)`, dimensionless). The
//! vacuum term is exactly `Γ₀ = 1`. For `R > 0` the exponent falls like
//! `N^{3/2}`, so the series converges for every fugacity; for `R = 0` it
//! is geometric and requires `e^(−α) < 2 sinh(β/2)`.
//!
//! Terms routinely span thousands of orders of magnitude (deeply
//! degenerate regimes need `α` in the hundreds), so all sums run in
//! log space, truncated once the term ratio drops below one and the
//! geometric tail estimate is negligible — the log-ratio is monotone
//! decreasing, so the tail really is dominated by a geometric series.

use crate::fockspace::sep_min_energy_mean_n;
use crate::par;
use crate::visibility::visibility;
use crate::{Error, Result};

/// Grand-canonical parameters in natural units: `β = u_E/(kT)`,
/// `α = −μ/(kT)`, and the coupling ratio `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    beta: f64,
    alpha: f64,
    coupling_ratio: f64,
}

impl ThermalParams {
    pub fn new(beta: f64, alpha: f64, coupling_ratio: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("fugacity parameter {alpha} not finite")));
        }
        if !(coupling_ratio >= 0.0) || !coupling_ratio.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling ratio must be nonnegative, got {coupling_ratio}"
            )));
        }
        Ok(Self { beta, alpha, coupling_ratio })
    }

    /// `β` in units of `1/u_E`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.coupling_ratio
    }

    /// Temperature in units of `u_T`.
    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }
}

/// `ln(2 sinh x)` for `x > 0` without overflow: `x + ln(1 − e^(−2x))`.
fn ln_2sinh(x: f64) -> f64 {
    if x < 0.5 {
        (2.0 * x.sinh()).ln()
    } else {
        x + (-(-2.0 * x).exp()).ln_1p()
    }
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// `ln Γ_N` for one particle-number sector.
pub fn ln_gamma_n(params: &ThermalParams, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let b = params.beta;
    let freq = (1.0 + nf * params.coupling_ratio).sqrt();
    -params.alpha * nf - ln_2sinh(b / 2.0) - (nf - 1.0) * ln_2sinh(b * freq / 2.0)
}

/// Sector weight `Γ_N` (may underflow to 0 or overflow to ∞ for extreme
/// parameters; use [`ln_gamma_n`] when composing by hand).
pub fn gamma_n(params: &ThermalParams, n: u64) -> f64 {
    ln_gamma_n(params, n).exp()
}

/// Truncated series scan: log-terms plus the running `ln Z`.
struct SeriesScan {
    ln_terms: Vec<f64>,
    ln_z: f64,
}

const MAX_SERIES_TERMS: u64 = 2_000_000;

fn scan_series(params: &ThermalParams, tol: f64) -> Result<SeriesScan> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if params.coupling_ratio == 0.0 {
        // Geometric series: the log-ratio is constant.
        let ln_ratio = -params.alpha - ln_2sinh(params.beta / 2.0);
        if ln_ratio >= 0.0 {
            return Err(Error::SeriesDivergence(format!(
                "R = 0 requires e^(-alpha) < 2 sinh(beta/2); alpha = {}, beta = {}",
                params.alpha, params.beta
            )));
        }
    }
    let mut ln_terms = vec![0.0];
    // Running log-sum-exp of the partial sum.
    let mut max_ln = 0.0f64;
    let mut scaled_sum = 1.0f64;
    let mut prev = 0.0f64;
    for n in 1..=MAX_SERIES_TERMS {
        let lg = ln_gamma_n(params, n);
        ln_terms.push(lg);
        if lg > max_ln {
            scaled_sum = scaled_sum * (max_ln - lg).exp() + 1.0;
            max_ln = lg;
        } else {
            scaled_sum += (lg - max_ln).exp();
        }
        let ln_ratio = lg - prev;
        prev = lg;
        if n >= 2 && ln_ratio < 0.0 {
            let ratio = ln_ratio.exp();
            let ln_tail = lg + (ratio / (1.0 - ratio)).ln();
            let ln_partial = max_ln + scaled_sum.ln();
            if ln_tail < tol.ln() + ln_partial {
                return Ok(SeriesScan { ln_terms, ln_z: ln_partial });
            }
        }
    }
    Err(Error::SeriesDivergence(format!(
        "series not converged after {MAX_SERIES_TERMS} terms (alpha = {}, beta = {}, R = {})",
        params.alpha, params.beta, params.coupling_ratio
    )))
}

/// Partition function with the number of summed sectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionFunction {
    /// `ln Z`; always ≥ 0 because the vacuum contributes `Γ₀ = 1`.
    pub ln_z: f64,
    /// Number of sector terms before the tail bound fell below `tol·Z`.
    pub terms: usize,
}

impl PartitionFunction {
    /// `Z` itself; `+∞` when `ln Z` exceeds the exponent range of `f64`.
    pub fn value(&self) -> f64 {
        self.ln_z.exp()
    }
}

/// `Z = Σ_N Γ_N`, truncated when the geometric tail estimate drops below
/// `tol · Z`.
pub fn partition_function(params: &ThermalParams, tol: f64) -> Result<PartitionFunction> {
    let scan = scan_series(params, tol)?;
    Ok(PartitionFunction { ln_z: scan.ln_z, terms: scan.ln_terms.len() })
}

/// Mean particle number `⟨N̂⟩ = Σ_N N Γ_N / Z`.
pub fn mean_particle_number(params: &ThermalParams, tol: f64) -> Result<f64> {
    let scan = scan_series(params, tol)?;
    Ok(scan
        .ln_terms
        .iter()
        .enumerate()
        .map(|(n, &lg)| n as f64 * (lg - scan.ln_z).exp())
        .sum())
}

/// Mean energy `⟨Ĥ⟩` in units of `u_E`:
/// `(1/2)[coth(β/2) + Σ_N (N−1)√(1+NR) coth(β√(1+NR)/2) Γ_N / Z]`.
///
/// The `N = 0` term of the sum cancels the leading coth exactly, so the
/// vacuum sector carries zero energy.
pub fn mean_energy(params: &ThermalParams, tol: f64) -> Result<f64> {
    let scan = scan_series(params, tol)?;
    let b = params.beta;
    let r = params.coupling_ratio;
    let weighted: f64 = scan
        .ln_terms
        .iter()
        .enumerate()
        .map(|(n, &lg)| {
            let nf = n as f64;
            let freq = (1.0 + nf * r).sqrt();
            (nf - 1.0) * freq * coth(b * freq / 2.0) * (lg - scan.ln_z).exp()
        })
        .sum();
    Ok(0.5 * (coth(b / 2.0) + weighted))
}

/// Solve for the fugacity parameter `α` that produces mean particle
/// number `target` at temperature `t` (units of `u_T`).
///
/// The mean is strictly decreasing in `α`, so a bracket is grown
/// geometrically and then bisected until `|⟨N̂⟩ − target| < tol`. At
/// `R = 0` the lower bracket approaches the convergence boundary
/// `α = −ln(2 sinh(β/2))` from above instead of growing without bound.
pub fn solve_alpha_for_mean_n(r: f64, t: f64, target: f64, tol: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("temperature must be positive, got {t}")));
    }
    if !(target >= 0.0) || !target.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target mean particle number must be nonnegative, got {target}"
        )));
    }
    if target == 0.0 {
        return Err(Error::VacuumBoundary);
    }
    let beta = 1.0 / t;
    let mean_at = |alpha: f64| -> Result<f64> {
        mean_particle_number(&ThermalParams::new(beta, alpha, r)?, tol.min(1e-10))
    };
    // R = 0: below alpha_floor the series diverges.
    let alpha_floor = if r == 0.0 { Some(-ln_2sinh(beta / 2.0)) } else { None };

    let mut hi = match alpha_floor {
        Some(floor) => floor + 1.0,
        None => 1.0,
    };
    for _ in 0..200 {
        if mean_at(hi)? < target {
            break;
        }
        match alpha_floor {
            Some(floor) => hi = floor + 2.0 * (hi - floor),
            None => hi *= 2.0,
        }
        if hi > 1e12 {
            return Err(Error::RootFinding(format!("no upper bracket for target {target}")));
        }
    }
    let mut lo = match alpha_floor {
        Some(floor) => floor + (hi - floor) / 2.0,
        None => (-1.0f64).min(hi - 2.0),
    };
    for _ in 0..200 {
        if mean_at(lo)? > target {
            break;
        }
        match alpha_floor {
            Some(floor) => lo = floor + (lo - floor) / 2.0,
            None => lo = 2.0 * lo.min(-1.0),
        }
        if lo < -1e12 {
            return Err(Error::RootFinding(format!("no lower bracket for target {target}")));
        }
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let m = mean_at(mid)?;
        if (m - target).abs() < tol {
            return Ok(mid);
        }
        if m > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    let residual = (mean_at(mid)? - target).abs();
    Err(Error::RootFinding(format!(
        "bisection stalled at alpha = {mid} with residual {residual} > {tol}"
    )))
}

/// One point of a thermal sweep, everything in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    /// Temperature in `u_T`.
    pub temperature: f64,
    /// Fugacity parameter solved for the requested mean.
    pub alpha: f64,
    /// Mean particle number actually realized.
    pub mean_n: f64,
    /// Mean energy `⟨Ĥ⟩` in `u_E`.
    pub mean_energy: f64,
    /// `ln Z` (the partition function itself can overflow `f64`).
    pub ln_z: f64,
    /// Entanglement visibility of the thermal state.
    pub visibility: f64,
}

impl ThermalPoint {
    pub fn partition_function_value(&self) -> f64 {
        self.ln_z.exp()
    }
}

/// Thermal entanglement visibility at coupling `r`, temperature `t`
/// (units of `u_T`), and mean particle number `target`.
///
/// Solves for `α`, computes `⟨Ĥ⟩`, and compares against the separable
/// Fock-space bound at the realized mean.
pub fn thermal_visibility(r: f64, t: f64, target: f64, tol: f64) -> Result<ThermalPoint> {
    let alpha = solve_alpha_for_mean_n(r, t, target, tol)?;
    let params = ThermalParams::new(1.0 / t, alpha, r)?;
    let series_tol = tol.min(1e-10);
    let mean_n = mean_particle_number(&params, series_tol)?;
    let energy = mean_energy(&params, series_tol)?;
    let z = partition_function(&params, series_tol)?;
    let report = visibility(energy, sep_min_energy_mean_n(r, mean_n))?;
    Ok(ThermalPoint {
        temperature: t,
        alpha,
        mean_n,
        mean_energy: energy,
        ln_z: z.ln_z,
        visibility: report.visibility,
    })
}

/// Sweep [`thermal_visibility`] over a `mean × temperature` grid.
///
/// Points are independent and evaluated data-parallel when the
/// `parallel` feature is on; the output is ordered mean-major,
/// temperature-minor regardless of scheduling.
pub fn thermal_grid(
    r: f64,
    means: &[f64],
    temperatures: &[f64],
    tol: f64,
) -> Result<Vec<ThermalPoint>> {
    let mut jobs = Vec::with_capacity(means.len() * temperatures.len());
    for &m in means {
        for &t in temperatures {
            jobs.push((m, t));
        }
    }
    par::map_collect(jobs, move |(m, t)| thermal_visibility(r, t, m, tol))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::mean_n_visibility;
    use approx::assert_relative_eq;

    fn params(beta: f64, alpha: f64, r: f64) -> ThermalParams {
        ThermalParams::new(beta, alpha, r).unwrap()
    }

    #[test]
    fn vacuum_term_is_exactly_one() {
        for (b, a, r) in [(0.01, -5.0, 1.0), (1.0, 0.0, 0.0), (300.0, 40.0, 7.5)] {
            assert_eq!(gamma_n(&params(b, a, r), 0), 1.0);
        }
    }

    #[test]
    fn single_particle_term_is_coupling_independent() {
        let expected = (-0.7f64).exp() / (2.0 * 0.65f64.sinh());
        for r in [0.0, 1.0, 42.0] {
            assert_relative_eq!(
                gamma_n(&params(1.3, 0.7, r), 1),
                expected,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn two_particle_term_uncoupled() {
        // Double geometric ladder: Γ₂ = 1/(2 sinh 0.5)² at α=0, β=1.
        let g2 = gamma_n(&params(1.0, 0.0, 0.0), 2);
        assert_relative_eq!(g2, (2.0 * 0.5f64.sinh()).powi(-2), max_relative = 1e-13);
        assert_relative_eq!(g2, 0.9206736, max_relative = 1e-7);
    }

    #[test]
    fn uncoupled_partition_function_is_geometric() {
        let (beta, alpha) = (1.3, 0.9);
        let z_site = 1.0 / (2.0 * (beta / 2.0f64).sinh());
        let q = (-alpha as f64).exp() * z_site;
        let z = partition_function(&params(beta, alpha, 0.0), 1e-12).unwrap();
        assert_relative_eq!(z.value(), 1.0 / (1.0 - q), max_relative = 1e-12);
        let n = mean_particle_number(&params(beta, alpha, 0.0), 1e-12).unwrap();
        assert_relative_eq!(n, q / (1.0 - q), max_relative = 1e-9);
    }

    #[test]
    fn uncoupled_series_diverges_past_critical_fugacity() {
        // e^(-alpha) ≥ 2 sinh(beta/2) has no finite sum.
        let p = params(1.0, -2.0, 0.0);
        assert!(matches!(partition_function(&p, 1e-10), Err(Error::SeriesDivergence(_))));
    }

    #[test]
    fn vacuum_dominates_at_low_temperature() {
        let z = partition_function(&params(60.0, 1.0, 1.0), 1e-13).unwrap();
        assert!((z.value() - 1.0).abs() < 1e-10);
        let n = mean_particle_number(&params(60.0, 40.0, 1.0), 1e-13).unwrap();
        assert!(n < 1e-10);
    }

    #[test]
    fn partition_function_matches_oversummed_series() {
        let p = params(1.0, 1.0, 1.0);
        let z = partition_function(&p, 1e-12).unwrap();
        let brute: f64 = (0..=200).map(|n| gamma_n(&p, n)).sum();
        assert_relative_eq!(z.value(), brute, max_relative = 1e-12);
    }

    #[test]
    fn thermodynamic_derivatives_match_finite_differences() {
        let h = 1e-5;
        for &(beta, alpha) in &[(0.5, 0.5), (1.0, 1.0), (2.0, 0.2)] {
            let r = 1.0;
            let ln_z = |b: f64, a: f64| partition_function(&params(b, a, r), 1e-13).unwrap().ln_z;
            let n_fd = -(ln_z(beta, alpha + h) - ln_z(beta, alpha - h)) / (2.0 * h);
            let n = mean_particle_number(&params(beta, alpha, r), 1e-13).unwrap();
            assert!((n_fd - n).abs() < 1e-6, "⟨N⟩ fd mismatch: {n_fd} vs {n}");
            let e_fd = -(ln_z(beta + h, alpha) - ln_z(beta - h, alpha)) / (2.0 * h);
            let e = mean_energy(&params(beta, alpha, r), 1e-13).unwrap();
            assert!((e_fd - e).abs() < 1e-6, "⟨H⟩ fd mismatch: {e_fd} vs {e}");
        }
    }

    #[test]
    fn uncoupled_energy_matches_direct_boltzmann_summation() {
        // Literal level sums per oscillator, then sector-weighted.
        let (beta, alpha) = (0.8, 1.1);
        let p = params(beta, alpha, 0.0);
        let site_weights: Vec<f64> =
            (0..=500).map(|k| (-beta * (k as f64 + 0.5)).exp()).collect();
        let site_z: f64 = site_weights.iter().sum();
        let site_e: f64 = site_weights
            .iter()
            .enumerate()
            .map(|(k, w)| (k as f64 + 0.5) * w)
            .sum::<f64>()
            / site_z;
        let mut z = 0.0;
        let mut e = 0.0;
        for n in 0..=300u64 {
            let g = gamma_n(&p, n);
            z += g;
            e += n as f64 * site_e * g;
        }
        assert_relative_eq!(
            mean_energy(&p, 1e-13).unwrap(),
            e / z,
            max_relative = 1e-10
        );
    }

    #[test]
    fn energy_decreases_on_cooling() {
        let mut prev = f64::INFINITY;
        for k in 0..=8 {
            let beta = 0.2 * 2f64.powi(k);
            let e = mean_energy(&params(beta, 0.5, 1.0), 1e-12).unwrap();
            assert!(e < prev, "⟨H⟩ must fall as β grows: {e} ≥ {prev}");
            prev = e;
        }
    }

    #[test]
    fn z_grows_as_alpha_falls() {
        let mut prev = 0.0;
        for k in 0..8 {
            let alpha = 4.0 - k as f64;
            let z = partition_function(&params(1.0, alpha, 1.0), 1e-12).unwrap();
            assert!(z.ln_z >= 0.0, "Z ≥ 1 always");
            assert!(z.ln_z > prev || k == 0);
            prev = z.ln_z;
        }
    }

    #[test]
    fn alpha_solver_matches_uncoupled_closed_form() {
        let (t, target) = (0.9, 3.0);
        let beta = 1.0 / t;
        let z_site = 1.0 / (2.0 * (beta / 2.0f64).sinh());
        let closed = (z_site * (1.0 + target) / target).ln();
        let solved = solve_alpha_for_mean_n(0.0, t, target, 1e-12).unwrap();
        assert!((solved - closed).abs() < 1e-10, "{solved} vs {closed}");
    }

    #[test]
    fn alpha_solver_self_consistency() {
        let alpha = solve_alpha_for_mean_n(1.0, 1.0, 5.0, 1e-9).unwrap();
        let n = mean_particle_number(&params(1.0, alpha, 1.0), 1e-12).unwrap();
        assert!((n - 5.0).abs() < 1e-8);
        assert!(matches!(solve_alpha_for_mean_n(1.0, 1.0, 0.0, 1e-9), Err(Error::VacuumBoundary)));
    }

    #[test]
    fn uncoupled_thermal_state_is_never_detected() {
        for t in [0.1, 1.0, 10.0] {
            for target in [0.5, 2.0, 8.0] {
                let point = thermal_visibility(0.0, t, target, 1e-9).unwrap();
                assert!(point.visibility < 0.0, "t={t} target={target}: V={}", point.visibility);
            }
        }
    }

    #[test]
    fn zero_temperature_limit_matches_mean_n_visibility() {
        let point = thermal_visibility(1.0, 1e-3, 3.0, 1e-9).unwrap();
        let frozen = mean_n_visibility(1.0, 3.0).unwrap().visibility;
        assert!(
            (point.visibility - frozen).abs() < 1e-3,
            "thermal {} vs ground {}",
            point.visibility,
            frozen
        );
        assert!(point.mean_energy >= crate::fockspace::ground_energy_mean_n(1.0, point.mean_n));
    }

    #[test]
    fn visibility_decays_with_temperature() {
        let temps: Vec<f64> =
            (0..25).map(|k| 10f64.powf(-2.0 + 4.0 * k as f64 / 24.0)).collect();
        let grid = thermal_grid(1.0, &[4.0], &temps, 1e-9).unwrap();
        for pair in grid.windows(2) {
            assert!(
                pair[1].visibility < pair[0].visibility + 1e-12,
                "V must decay with T: {} then {}",
                pair[0].visibility,
                pair[1].visibility
            );
        }
    }
}
