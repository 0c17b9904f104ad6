//! The `verify` subcommand: run the oracle suite against the closed
//! forms and report one line per check.

use std::time::Instant;

use entvis::closedform::{fully_separable_min_energy, standard_ground_energy};
use entvis::fockspace::{mean_n_visibility, sep_min_energy_mean_n};
use entvis::model::{EnsembleSpec, Partition};
use entvis::oracle::{
    alternating_separability_solver, brute_force_distribution_min, build_hamiltonian_matrix,
    smallest_eigenvalue, TruncatedBasisConfig,
};
use entvis::thermal::{
    mean_energy, mean_particle_number, partition_function, thermal_visibility, ThermalParams,
};
use entvis::visibility::max_visibility;

use crate::CliError;

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("{name}: PASS ({detail})"),
            Err(why) => {
                println!("{name}: FAIL ({why})");
                self.failures += 1;
            }
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn diag_ground(n: u64, r: f64, d: usize) -> Result<f64, String> {
    let spec = EnsembleSpec::new(n, r).map_err(|e| e.to_string())?;
    let h = build_hamiltonian_matrix(&spec, &TruncatedBasisConfig::with_site_dim(d))
        .map_err(|e| e.to_string())?;
    smallest_eigenvalue(&h, 1e-9).map_err(|e| e.to_string())
}

fn alt_bound(n: u64, r: f64, d: usize) -> Result<f64, String> {
    let spec = EnsembleSpec::new(n, r).map_err(|e| e.to_string())?;
    alternating_separability_solver(
        &spec,
        &Partition::full(n).map_err(|e| e.to_string())?,
        &TruncatedBasisConfig::with_site_dim(d),
    )
    .map(|s| s.value)
    .map_err(|e| e.to_string())
}

/// Runs the whole suite; returns the number of failed checks.
pub fn run(fast: bool) -> Result<usize, CliError> {
    let start = Instant::now();
    let mut suite = Suite { failures: 0 };

    suite.check("bipartite ground energy (diagonalization, d=40)", {
        diag_ground(2, 1.5, 40).and_then(|lambda| {
            let exact = standard_ground_energy(2.0, 1.5);
            let err = rel(lambda, exact);
            if err <= 1e-6 {
                Ok(format!("relative error {err:.1e}"))
            } else {
                Err(format!("{lambda} vs {exact}"))
            }
        })
    });

    suite.check("bipartite separable bound (alternating solver, d=30)", {
        alt_bound(2, 1.5, 30).and_then(|bound| {
            let exact = fully_separable_min_energy(2.0, 1.5);
            let err = rel(bound, exact);
            if err <= 1e-6 {
                Ok(format!("relative error {err:.1e}"))
            } else {
                Err(format!("{bound} vs {exact}"))
            }
        })
    });

    let cells: &[(u64, usize, usize)] =
        if fast { &[(2, 40, 30), (3, 20, 20)] } else { &[(2, 40, 30), (3, 20, 20), (4, 11, 11)] };
    for &(n, diag_dim, alt_dim) in cells {
        for &r in &[0.5, 1.0, 10.0] {
            let name = format!("multipartite visibility N={n} R={r}");
            let result = (|| {
                let spec = EnsembleSpec::new(n, r).map_err(|e| e.to_string())?;
                let formula = max_visibility(&spec).visibility;
                let ground = diag_ground(n, r, diag_dim)?;
                let bound = alt_bound(n, r, alt_dim)?;
                let oracle = (bound - ground) / (bound + ground);
                let diff = (formula - oracle).abs();
                if diff <= 1e-5 {
                    Ok(format!("|ΔV| = {diff:.1e}"))
                } else {
                    Err(format!("formula {formula} vs oracle {oracle}"))
                }
            })();
            suite.check(&name, result);
        }
    }

    suite.check("mean-number bound vs brute-force distributions", {
        let pairs = if fast { 20 } else { 100 };
        let mut worst = 0.0f64;
        let mut failure = None;
        for k in 0..pairs {
            // Deterministic low-discrepancy samples.
            let mean = 1.0 + 39.0 * ((k as f64) * 0.618_033_988_749_895).fract();
            let r = 10f64.powf(-1.0 + 2.0 * ((k as f64) * 0.754_877_666).fract());
            let closed = sep_min_energy_mean_n(r, mean);
            let f: Vec<f64> =
                (0..=50).map(|n| fully_separable_min_energy(n as f64, r)).collect();
            match brute_force_distribution_min(&f, mean, 50) {
                Ok((_, brute)) => {
                    let diff = (closed - brute).abs() / brute.max(1.0);
                    worst = worst.max(diff);
                    if diff > 1e-10 {
                        failure = Some(format!("mean={mean} R={r}: {closed} vs {brute}"));
                    }
                }
                Err(e) => failure = Some(e.to_string()),
            }
        }
        match failure {
            None => Ok(format!("{pairs} pairs, worst relative gap {worst:.1e}")),
            Some(f) => Err(f),
        }
    });

    suite.check("thermal derivatives vs finite differences", {
        (|| {
            let p = |b: f64, a: f64| ThermalParams::new(b, a, 1.0).map_err(|e| e.to_string());
            let h = 1e-5;
            let ln_z = |b: f64, a: f64| -> Result<f64, String> {
                partition_function(&p(b, a)?, 1e-13).map(|z| z.ln_z).map_err(|e| e.to_string())
            };
            let n_fd = -(ln_z(1.0, 1.0 + h)? - ln_z(1.0, 1.0 - h)?) / (2.0 * h);
            let n = mean_particle_number(&p(1.0, 1.0)?, 1e-13).map_err(|e| e.to_string())?;
            let e_fd = -(ln_z(1.0 + h, 1.0)? - ln_z(1.0 - h, 1.0)?) / (2.0 * h);
            let e = mean_energy(&p(1.0, 1.0)?, 1e-13).map_err(|e| e.to_string())?;
            let gap = (n_fd - n).abs().max((e_fd - e).abs());
            if gap <= 1e-6 {
                Ok(format!("worst gap {gap:.1e}"))
            } else {
                Err(format!("gap {gap}"))
            }
        })()
    });

    suite.check("uncoupled thermal closed forms", {
        (|| {
            let (beta, alpha) = (1.1, 0.8);
            let params = ThermalParams::new(beta, alpha, 0.0).map_err(|e| e.to_string())?;
            let z_site = 1.0 / (2.0 * (beta / 2.0f64).sinh());
            let q = (-alpha as f64).exp() * z_site;
            let z = partition_function(&params, 1e-14).map_err(|e| e.to_string())?.value();
            let n = mean_particle_number(&params, 1e-14).map_err(|e| e.to_string())?;
            let gap = rel(z, 1.0 / (1.0 - q)).max(rel(n, q / (1.0 - q)));
            if gap <= 1e-12 {
                Ok(format!("worst relative gap {gap:.1e}"))
            } else {
                Err(format!("gap {gap}"))
            }
        })()
    });

    suite.check("zero-temperature limit of the thermal visibility", {
        (|| {
            let cold = thermal_visibility(1.0, 1e-3, 3.0, 1e-9).map_err(|e| e.to_string())?;
            let frozen =
                mean_n_visibility(1.0, 3.0).map_err(|e| e.to_string())?.visibility;
            let gap = (cold.visibility - frozen).abs();
            if gap <= 1e-3 {
                Ok(format!("gap {gap:.1e}"))
            } else {
                Err(format!("thermal {} vs ground {frozen}", cold.visibility))
            }
        })()
    });

    println!(
        "verification {}: {} check(s) failed ({:.1} s)",
        if suite.failures == 0 { "passed" } else { "FAILED" },
        suite.failures,
        start.elapsed().as_secs_f64()
    );
    Ok(suite.failures)
}
