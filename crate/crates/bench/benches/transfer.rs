use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use linfty_core::ce::{build_ce, transfer_homotopy_h, KoszulChart};
use linfty_core::fixtures;
use linfty_core::transfer::{expansion_oracle, step1_pipeline, transfer, Contraction};
use linfty_core::{Poly, PolyRing};

fn e4() -> (linfty_core::point::CurvedStructure<linfty_core::Rat>, Contraction) {
    let (delta, eta) = fixtures::e4_delta_eta();
    (fixtures::e4(), Contraction::new(delta, eta, fixtures::e4_filtration()).unwrap())
}

fn transfers(c: &mut Criterion) {
    let (s, k) = e4();
    c.bench_function("transfer/e4", |b| b.iter(|| transfer(black_box(&s), black_box(&k)).unwrap()));
    c.bench_function("oracle/e4", |b| b.iter(|| expansion_oracle(black_box(&s), black_box(&k)).unwrap()));

    let mut rng = fixtures::rng(3);
    let cases: Vec<_> = (0..8).map(|_| fixtures::random_transfer(&mut rng, 5, 6)).collect();
    c.bench_function("transfer/random-5-6", |b| {
        b.iter(|| {
            for (s, k) in &cases {
                black_box(transfer(s, k).unwrap());
            }
        })
    });

    let m = fixtures::e5_morphism();
    c.bench_function("step1/e5", |b| b.iter(|| step1_pipeline(black_box(&m)).unwrap()));
}

fn algebra(c: &mut Criterion) {
    let (s, k) = e4();
    c.bench_function("q-square/e4", |b| b.iter(|| build_ce(black_box(&s)).q_square_check()));
    let t = transfer(&s, &k).unwrap();
    let h = transfer_homotopy_h(&s, &t).unwrap();
    c.bench_function("heq/e4-weight-4", |b| b.iter(|| h.heq_check(black_box(4))));

    let ring = PolyRing::new(["x0", "x1", "x2"]);
    let chart = KoszulChart::new(ring, &[Poly::var(0), Poly::var(1)]).unwrap();
    c.bench_function("koszul/n3-k2-d6", |b| b.iter(|| chart.identity_check(black_box(6))));
}

criterion_group!(benches, transfers, algebra);
criterion_main!(benches);
