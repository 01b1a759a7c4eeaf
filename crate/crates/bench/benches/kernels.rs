use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nblow_bench::{diagonal_window, eg3_ideals, fixture_sequence};
use nblow_core::geometry::min_separating_degree;
use nblow_core::sequence::{closure_orbit, naive_power, right_torsion};
use nblow_core::sparse::check_bounding;
use nblow_core::{BoundingFunction, SparseSetWindow};

fn monomial(c: &mut Criterion) {
    let [j, q, i, p, k] = eg3_ideals().unwrap();
    c.bench_function("multiply P*J", |b| b.iter(|| black_box(&p).multiply(black_box(&j)).unwrap()));
    c.bench_function("colon K:Q", |b| b.iter(|| black_box(&k).colon(black_box(&q)).unwrap()));
    c.bench_function("intersect I,Q", |b| b.iter(|| black_box(&i).intersect(black_box(&q)).unwrap()));
}

fn sequences(c: &mut Criterion) {
    let nn = fixture_sequence("not-naive", 12).unwrap();
    let seed = nn.seed().unwrap();
    c.bench_function("naive_power n=40", |b| b.iter(|| naive_power(black_box(&seed), 40).unwrap()));
    c.bench_function("right_torsion not-naive H=12", |b| b.iter(|| right_torsion(black_box(&nn)).unwrap()));
    let eg2 = fixture_sequence("eg2", 10).unwrap();
    c.bench_function("closure_orbit eg2 H=10", |b| b.iter(|| closure_orbit(black_box(&eg2), 8).unwrap()));
}

fn sparse(c: &mut Criterion) {
    let squares = SparseSetWindow::squares(10_000);
    let bound = BoundingFunction::Poly { coeff: 4, exp: 2 };
    c.bench_function("check_bounding squares H=1e4", |b| b.iter(|| check_bounding(black_box(&squares), &bound, 20)));
}

fn geometry(c: &mut Criterion) {
    let pts = diagonal_window(10).unwrap();
    c.bench_function("min_separating_degree diag n=10", |b| b.iter(|| min_separating_degree(black_box(&pts)).unwrap()));
}

criterion_group!(benches, monomial, sequences, sparse, geometry);
criterion_main!(benches);
