use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qdisk_bench::{free, qpoly};
use qdisk_core::elements::{normal_order, qpoly_mul};
use qdisk_core::fock::op_norm_bounds;
use qdisk_core::norms::{free_norm, qpoly_norm};
use qdisk_core::qcombinat::{fiber_words, q_multinomial, MultiIndex, FIBER_CAP};
use qdisk_core::spectral::{radius_estimate, Generators, TupleSpec};
use qdisk_core::{Family, NormSpec, QParam};

fn combinatorics(c: &mut Criterion) {
    let k = MultiIndex::new(vec![4, 3, 3]);
    let q = QParam::real(0.7).unwrap();
    c.bench_function("q_multinomial (4,3,3)", |b| {
        b.iter(|| q_multinomial(black_box(&k), q.value()))
    });
    c.bench_function("fiber_words (4,3,3)", |b| {
        b.iter(|| fiber_words(black_box(&k), FIBER_CAP))
    });
}

fn algebra(c: &mut Criterion) {
    let a = qpoly(3, 6, 40, 0.5);
    let b = qpoly(3, 6, 40, 0.5);
    c.bench_function("qpoly_mul 40x40 terms", |bn| {
        bn.iter(|| qpoly_mul(black_box(&a), &b, None))
    });
    let f = free(3, 8, 60);
    let q = QParam::real(0.5).unwrap();
    c.bench_function("normal_order 60 words", |bn| {
        bn.iter(|| normal_order(black_box(&f), q))
    });
}

fn norms(c: &mut Criterion) {
    let a = qpoly(3, 8, 100, 0.5);
    let ball = NormSpec::simple(Family::Ball, 0.9).unwrap();
    c.bench_function("ball norm 100 terms", |b| {
        b.iter(|| qpoly_norm(black_box(&a), &ball))
    });
    let f = free(3, 8, 100);
    let circ = NormSpec::simple(Family::FreeBallCirc, 0.9).unwrap();
    c.bench_function("free-ball-circ norm 100 words", |b| {
        b.iter(|| free_norm(black_box(&f), &circ))
    });
}

fn spectral_and_fock(c: &mut Criterion) {
    let q = QParam::unimodular(0.3);
    let t = TupleSpec::new(
        Generators::Coordinates { n: 3, q },
        NormSpec::simple(Family::Ball, 1.0).unwrap(),
        2.0,
        40,
    )
    .unwrap();
    c.bench_function("ball radius n=3 d=40", |b| {
        b.iter(|| radius_estimate(black_box(&t), 40))
    });
    let a = qpoly(2, 3, 6, 0.5);
    c.bench_function("fock op norm depth 12", |b| {
        b.iter(|| op_norm_bounds(black_box(&a), 1.0, 12))
    });
}

criterion_group!(benches, combinatorics, algebra, norms, spectral_and_fock);
criterion_main!(benches);
