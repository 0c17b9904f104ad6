//! Parallel-vs-sequential benchmarks for the data-parallel sweeps.
//!
//! Run once with the default features and once without to compare the
//! two execution modes on the same workloads:
//!
//! ```text
//! cargo bench -p entvis
//! cargo bench -p entvis --no-default-features
//! ```
//!
//! Group names carry the active mode, so criterion keeps the baselines
//! side by side.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use entvis::closedform::{wavefunction_eval, ExcitationLabel, WavefunctionQuery};
use entvis::model::{EnsembleSpec, Partition};
use entvis::oracle::{
    alternating_separability_solver, build_hamiltonian_matrix, smallest_eigenvalue,
    TruncatedBasisConfig,
};
use entvis::thermal::thermal_grid;

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "serial"
    }
}

fn bench_thermal_grid(c: &mut Criterion) {
    let means: Vec<f64> = (0..20).map(|k| 2.0 + 2.0 * k as f64).collect();
    let temps: Vec<f64> = (0..20).map(|k| 10f64.powf(-2.0 + 4.0 * k as f64 / 19.0)).collect();
    c.bench_function(&format!("thermal_grid_20x20/{}", mode()), |b| {
        b.iter(|| thermal_grid(1.0, black_box(&means), black_box(&temps), 1e-8).unwrap())
    });
}

fn bench_wavefunction_grid(c: &mut Criterion) {
    let spec = EnsembleSpec::new(2, 1.5).unwrap();
    let partition = Partition::trivial(2).unwrap();
    let label = ExcitationLabel::ground(&partition);
    let mut points = Vec::new();
    let steps = 120;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = -4.0 + 8.0 * i as f64 / steps as f64;
            let y = -4.0 + 8.0 * j as f64 / steps as f64;
            points.push(vec![x, y]);
        }
    }
    let query = WavefunctionQuery { partition, label, points, normalized: true };
    c.bench_function(&format!("wavefunction_grid_121x121/{}", mode()), |b| {
        b.iter(|| wavefunction_eval(black_box(&query), &spec).unwrap())
    });
}

fn bench_alternating_restarts(c: &mut Criterion) {
    let spec = EnsembleSpec::new(3, 1.0).unwrap();
    let partition = Partition::full(3).unwrap();
    let config = TruncatedBasisConfig::with_site_dim(14);
    c.bench_function(&format!("alternating_solver_n3_d14/{}", mode()), |b| {
        b.iter(|| alternating_separability_solver(&spec, &partition, black_box(&config)).unwrap())
    });
}

fn bench_lanczos(c: &mut Criterion) {
    let spec = EnsembleSpec::new(3, 1.0).unwrap();
    let h = build_hamiltonian_matrix(&spec, &TruncatedBasisConfig::with_site_dim(18)).unwrap();
    c.bench_function(&format!("lanczos_smallest_5832/{}", mode()), |b| {
        b.iter(|| smallest_eigenvalue(black_box(&h), 1e-9).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_thermal_grid, bench_wavefunction_grid, bench_alternating_restarts, bench_lanczos
}
criterion_main!(benches);
