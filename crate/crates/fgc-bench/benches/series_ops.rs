//! Benchmarks for the hot paths: series products, inverses, law
//! construction/verification, symmetric expansion, and the Euler-Tate
//! class on bundles.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fgc_core::charclass::{symmetric_expand, BundleData};
use fgc_core::fgl::FglKind;
use fgc_core::ring::GradedRing;
use fgc_core::series::TruncSeries;
use fgc_core::tate::{tch_on_bundle, TateContext};

fn dense_series(vars: &[&str], trunc: u32) -> TruncSeries {
    let ring = GradedRing::rationals();
    let mut acc = TruncSeries::one(&ring, vars, trunc);
    for (i, v) in vars.iter().enumerate() {
        let x = TruncSeries::var(&ring, v, trunc);
        let scaled = x.mul_scalar(&fgc_core::Scalar::from_i64(
            fgc_core::BaseRing::Rationals,
            i as i64 + 1,
        ));
        acc = acc.add(&scaled).unwrap();
    }
    // (1 + sum c_i x_i)^3 gives a reasonably dense operand.
    acc.pow(3).unwrap()
}

fn bench_series_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_mul");
    for trunc in [6u32, 10] {
        let f = dense_series(&["x", "y", "z"], trunc);
        group.bench_with_input(BenchmarkId::from_parameter(trunc), &f, |b, f| {
            b.iter(|| f.mul(f).unwrap())
        });
    }
    group.finish();
}

fn bench_series_invert(c: &mut Criterion) {
    let f = dense_series(&["x", "y"], 10);
    c.bench_function("series_invert_deg10", |b| b.iter(|| f.invert().unwrap()));
}

fn bench_law_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("law_build_verify");
    group.sample_size(10);
    for (name, kind) in [
        ("multiplicative", FglKind::Multiplicative),
        ("universal4", FglKind::UniversalRational(4)),
        ("jacobi", FglKind::JacobiQuartic),
    ] {
        group.bench_function(name, |b| b.iter(|| kind.build(8).unwrap()));
    }
    group.finish();
}

fn bench_symmetric_expand(c: &mut Criterion) {
    let ring = GradedRing::rationals();
    let vars: Vec<String> = (1..=4).map(|i| format!("x{}", i)).collect();
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut p = TruncSeries::one(&ring, &refs, 8);
    for v in &refs {
        let one_plus = TruncSeries::one(&ring, &[v], 8)
            .add(&TruncSeries::var(&ring, v, 8))
            .unwrap();
        p = p.mul(&one_plus).unwrap();
    }
    let p = p.pow(2).unwrap();
    c.bench_function("symmetric_expand_n4_deg8", |b| {
        b.iter(|| symmetric_expand(&p, 4).unwrap())
    });
}

fn bench_tch(c: &mut Criterion) {
    let mut group = c.benchmark_group("tch_on_bundle");
    group.sample_size(10);
    for rank in [2u32, 3] {
        let ctx = TateContext::build(FglKind::Multiplicative, (-((rank + 4) as i64), 4), 4, rank)
            .unwrap();
        let v = BundleData::standard_roots(rank as usize);
        group.bench_with_input(
            BenchmarkId::from_parameter(rank),
            &(ctx, v),
            |b, (ctx, v)| b.iter(|| tch_on_bundle(ctx, v).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_series_mul,
    bench_series_invert,
    bench_law_build,
    bench_symmetric_expand,
    bench_tch
);
criterion_main!(benches);
