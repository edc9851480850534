use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use zgunits_bench::fixture;
use zgunits_core::free::{certify_freeness_with, KernelChoice};
use zgunits_core::poly::{big_f, sweep_nonvanishing, sweep_power_identity};
use zgunits_core::{make_family, order_oracle, GroupRing};

fn ring_mul(c: &mut Criterion) {
    let (g, w) = fixture("S3xS3", "(1 2 3)(4 5)", "(1 2)(4 6)");
    let fam = make_family(GroupRing::integral(&g), &w, 1).unwrap();
    c.bench_function("ring_mul_s3xs3_u_z", |bench| {
        bench.iter(|| fam.ring.mul(black_box(&fam.u), black_box(&fam.z)).unwrap())
    });
    c.bench_function("order_oracle_s3xs3", |bench| {
        bench.iter(|| order_oracle(black_box(&fam)).unwrap())
    });
}

fn freeness(c: &mut Criterion) {
    let (g, w) = fixture("S3", "(1 2)", "(1 2 3)");
    let fam = make_family(GroupRing::integral(&g), &w, 1).unwrap();
    let mut group = c.benchmark_group("freeness_s3_l10");
    for (label, choice) in [("fast", KernelChoice::Fast), ("exact", KernelChoice::Exact)] {
        group.bench_function(BenchmarkId::from_parameter(label), |bench| {
            bench.iter(|| certify_freeness_with(&fam, 10, 3, choice).unwrap())
        });
    }
    group.finish();

    let (g, w) = fixture("D4", "(2 4)", "(1 2 3 4)");
    let fam = make_family(GroupRing::integral(&g), &w, 1).unwrap();
    let mut group = c.benchmark_group("freeness_d4_l4");
    group.sample_size(10);
    for (label, choice) in [("fast", KernelChoice::Fast), ("exact", KernelChoice::Exact)] {
        group.bench_function(BenchmarkId::from_parameter(label), |bench| {
            bench.iter(|| certify_freeness_with(&fam, 4, 3, choice).unwrap())
        });
    }
    group.finish();
}

fn polynomial_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("poly");
    group.sample_size(10);
    group.bench_function("power_identity_n12", |bench| {
        bench.iter(|| sweep_power_identity(black_box(12), big_f))
    });
    group.bench_function("nonvanishing_n8_jls2", |bench| {
        bench.iter(|| sweep_nonvanishing(black_box(8), 2))
    });
    group.finish();
}

criterion_group!(benches, ring_mul, freeness, polynomial_sweeps);
criterion_main!(benches);
