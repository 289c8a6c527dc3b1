use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use selmat_core::jack::{jack_basis, kadell_ratio};
use selmat_core::moments::{ensemble_moments, Convention, EnsembleSpec};
use selmat_core::weingarten::wg_unitary;
use selmat_core::{Partition, Rational};

fn jack(c: &mut Criterion) {
    let kappa = Rational::new(1, 2);
    c.bench_function("jack_basis_degree_6", |b| {
        b.iter(|| jack_basis(black_box(&Rational::new(3, 7)), 6).unwrap())
    });
    let lambda = Partition::new(vec![3, 2, 1]);
    c.bench_function("kadell_ratio_321", |b| {
        b.iter(|| kadell_ratio(&lambda, black_box(12), &Rational::one(), &Rational::one(), &kappa).unwrap())
    });
}

fn moments(c: &mut Criterion) {
    let spec = EnsembleSpec::all()[0];
    c.bench_function("ensemble_moments_n100", |b| {
        b.iter(|| ensemble_moments(spec, black_box(100), Convention::Forced).unwrap())
    });
}

fn weingarten(c: &mut Criterion) {
    let ty = Partition::new(vec![2, 2, 1, 1]);
    c.bench_function("wg_unitary_k6", |b| {
        b.iter(|| wg_unitary(&ty, black_box(&Rational::integer(10)), None).unwrap())
    });
}

criterion_group!(benches, jack, moments, weingarten);
criterion_main!(benches);
