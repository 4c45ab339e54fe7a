use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use freext_core::arrangement::{b2, b3};
use freext_core::classify::{b2_exponents, solver_b2};
use freext_core::extend::{search_free_extensions, yoshinaga_extension, yoshinaga_freeness, SearchDomain};
use freext_core::lattice::intersection_lattice;
use freext_core::Field;

const Q: Field = Field::Rationals;

fn exponents(c: &mut Criterion) {
    let mut g = c.benchmark_group("exponents");
    for m in [[2, 4, 1, 4], [3, 5, 2, 2], [4, 4, 3, 3]] {
        g.bench_function(format!("solver {m:?}"), |b| b.iter(|| solver_b2(black_box(m)).unwrap()));
        g.bench_function(format!("rules {m:?}"), |b| b.iter(|| b2_exponents(black_box(m)).unwrap()));
    }
    g.finish();
}

fn lattice(c: &mut Criterion) {
    let b3_simple = b3(Q, [1; 9]).unwrap();
    let yext = yoshinaga_extension(&b2(Q, [3, 5, 2, 2]).unwrap()).unwrap();
    let e = yext.arrangement();
    c.bench_function("lattice B3", |b| b.iter(|| intersection_lattice(black_box(&b3_simple)).unwrap()));
    c.bench_function("freeness of the (3,5,2,2) extension", |b| {
        b.iter(|| yoshinaga_freeness(black_box(&e), &yext.distinguished()).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    for m in [[2, 3, 1, 3], [2, 4, 1, 4]] {
        let base = b2(Q, m).unwrap();
        let domain = SearchDomain::rational_grid(4);
        g.bench_function(format!("{m:?} height 4"), |b| {
            b.iter(|| search_free_extensions(black_box(&base), &domain, None).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, exponents, lattice, search);
criterion_main!(benches);
