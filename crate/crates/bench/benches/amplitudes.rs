use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dissres_bench::{barrier, energy, kernel};
use dissres_core::{amplitude_w, distribution_f_d, CumulativeAmplitude, SpectralConfig, SpectralSolver};

fn bare(c: &mut Criterion) {
    let b = barrier();
    c.bench_function("amplitude_w", |bn| bn.iter(|| amplitude_w(black_box(energy(1.3)), b)));
}

fn damped(c: &mut Criterion) {
    let b = barrier();
    let solver = SpectralSolver::new(&kernel(5e-3)).unwrap();
    let mut g = c.benchmark_group("w_d");
    for tol in [1e-6, 1e-10] {
        g.bench_function(format!("tol {tol:e}"), |bn| bn.iter(|| solver.amplitude(black_box(energy(1.3)), b, tol).unwrap()));
    }
    g.finish();
}

fn traversal(c: &mut Criterion) {
    let b = barrier();
    let k = kernel(5e-3);
    let mut g = c.benchmark_group("traversal");
    g.sample_size(10);
    g.bench_function("distribution_f_d", |bn| {
        bn.iter(|| distribution_f_d(energy(1.3), b, &k, &SpectralConfig::default()).unwrap())
    });
    g.bench_function("cumulative_setup", |bn| {
        bn.iter(|| CumulativeAmplitude::new(energy(1.3), b, &k, &Default::default()).unwrap())
    });
    let cum = CumulativeAmplitude::new(energy(1.3), b, &k, &Default::default()).unwrap();
    g.bench_function("cumulative_at", |bn| bn.iter(|| cum.at(black_box(5.0)).unwrap()));
    g.finish();
}

criterion_group!(benches, bare, damped, traversal);
criterion_main!(benches);
