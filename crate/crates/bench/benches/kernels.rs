use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qutrit_bench::figure_setup;
use qutrit_core::{
    build_env_hamiltonian, evolved_state, negativity_spectral, time_series, Complex64, DecoherenceSet, StateKernel,
    SweepOptions, ThreeSiteSign, TimeGrid,
};

fn series(c: &mut Criterion) {
    let (params, coupling) = figure_setup(0.5, 0.5, 1.0);
    let grid = TimeGrid::default();
    c.bench_function("time_series n=3001 501 points", |b| {
        b.iter(|| time_series(black_box(&params), coupling, &grid, &SweepOptions::default()).unwrap())
    });
    let kernel = StateKernel::new(&params, coupling);
    c.bench_function("state kernel magnitudes n=3001", |b| b.iter(|| kernel.magnitudes(black_box(17.3))));
}

fn negativity(c: &mut Criterion) {
    let f = DecoherenceSet {
        f15: Complex64::from_polar(0.8, 0.3),
        f19: Complex64::from_polar(0.4, -1.2),
        f59: Complex64::from_polar(0.6, 2.5),
    };
    let state = evolved_state(&f).unwrap();
    c.bench_function("spectral negativity 9x9", |b| b.iter(|| negativity_spectral(black_box(&state)).unwrap()));
}

fn exact_diagonalisation(c: &mut Criterion) {
    let h = build_env_hamiltonian(9, 1.0, 0.3, 1.0, ThreeSiteSign::AsPrinted).unwrap();
    let mut group = c.benchmark_group("ed");
    group.sample_size(10);
    group.bench_function("eigensystem n=9", |b| b.iter(|| black_box(&h).eigensystem()));
    group.finish();
}

criterion_group!(benches, series, negativity, exact_diagonalisation);
criterion_main!(benches);
