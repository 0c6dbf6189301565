use criterion::{black_box, criterion_group, criterion_main, Criterion};
use landau1d_core::certificates::{build_partition, no_binding_certificate, BoundParams};
use landau1d_core::interactions::{eval_w, oracle_w_direct, pair_coefficients};
use landau1d_core::models::make_m_model;
use landau1d_core::potentials::eval_vm;
use landau1d_core::spectral::{discretize, ground_state, Grid1D};
use landau1d_core::QuadratureSpec;

fn bench_potentials(c: &mut Criterion) {
    let quad = QuadratureSpec::default();
    c.bench_function("eval_vm quadrature m=5 x=1", |b| {
        b.iter(|| eval_vm(black_box(5), black_box(1.0), &quad).unwrap())
    });
    c.bench_function("eval_vm erfc path m=0 x=1", |b| {
        b.iter(|| eval_vm(black_box(0), black_box(1.0), &quad).unwrap())
    });
    c.bench_function("eval_vm asymptotic m=3 x=100", |b| {
        b.iter(|| eval_vm(black_box(3), black_box(100.0), &quad).unwrap())
    });
}

fn bench_interactions(c: &mut Criterion) {
    let quad = QuadratureSpec::default();
    c.bench_function("pair_coefficients (6,6)", |b| {
        b.iter(|| pair_coefficients(black_box(6), black_box(6)).unwrap())
    });
    let coeffs = pair_coefficients(3, 4).unwrap();
    c.bench_function("eval_w (3,4) x=1", |b| {
        b.iter(|| eval_w(&coeffs, black_box(1.0), &quad).unwrap())
    });
    c.bench_function("oracle_w_direct (3,4) x=1", |b| {
        b.iter(|| oracle_w_direct(3, 4, black_box(1.0), &quad).unwrap())
    });
}

fn bench_spectral(c: &mut Criterion) {
    let grid = Grid1D::new(15.0, 2001).unwrap();
    let op = discretize(grid, 1.0, |x| x * x).unwrap();
    c.bench_function("tridiagonal ground state n=2001", |b| {
        b.iter(|| ground_state(black_box(&op), 1e-10).unwrap())
    });
}

fn bench_certificates(c: &mut Criterion) {
    let model = make_m_model(0);
    let params = BoundParams::default();
    c.bench_function("no_binding_certificate", |b| {
        b.iter(|| no_binding_certificate(black_box(256), 2.0, 1e4, &model, &params).unwrap())
    });
    let part = build_partition(16, 1.0, 1.0).unwrap();
    let x: Vec<f64> = (0..16).map(|i| 0.3 * (i as f64 - 8.0)).collect();
    c.bench_function("partition values N=16", |b| {
        b.iter(|| part.values(black_box(&x)))
    });
}

criterion_group!(
    benches,
    bench_potentials,
    bench_interactions,
    bench_spectral,
    bench_certificates
);
criterion_main!(benches);
