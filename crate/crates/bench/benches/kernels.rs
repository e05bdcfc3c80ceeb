//! Hot-path benchmarks: the keyed coupling hash, union-find clustering,
//! ball construction, and lazy cluster exploration.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use std::hint::black_box;

use relperc_bench::{free_ball, lattice_ball};
use relperc_core::coupling::CouplingField;
use relperc_core::groups::{build_ball, parse_group};
use relperc_core::percolation::explore::{explore_cluster, Flow, LazyBall, Topology};
use relperc_core::percolation::{clusters, sample};

fn bench_coupling(c: &mut Criterion) {
    let field = CouplingField::new(7);
    let mut group = c.benchmark_group("coupling");
    group.throughput(Throughput::Elements(1024));
    group.bench_function("value_1k", |b| {
        b.iter(|| {
            let mut acc = 0.0f64;
            for k in 0..1024u64 {
                acc += field.value(black_box(k.wrapping_mul(0x9e3779b97f4a7c15)));
            }
            acc
        })
    });
    group.finish();
}

fn bench_union_find(c: &mut Criterion) {
    let ball = lattice_ball(48);
    let field = CouplingField::new(3);
    let mut group = c.benchmark_group("clusters");
    group.throughput(Throughput::Elements(ball.edge_count() as u64));
    group.bench_function("lattice2_R48_p0.5", |b| {
        let config = sample(&ball, &field, 0.5).unwrap();
        b.iter(|| clusters(&ball, black_box(&config)))
    });
    group.bench_function("sample+cluster_lattice2_R48", |b| {
        let mut seed = 0u64;
        b.iter_batched(
            || {
                seed += 1;
                CouplingField::new(seed)
            },
            |f| {
                let config = sample(&ball, &f, 0.5).unwrap();
                clusters(&ball, &config)
            },
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_ball_build(c: &mut Criterion) {
    let free = parse_group("free:2").unwrap();
    let wreath = parse_group("wreath:z2:free:2").unwrap();
    let mut group = c.benchmark_group("build_ball");
    group.sample_size(20);
    group.bench_function("free2_R8", |b| b.iter(|| build_ball(black_box(&free), 8)));
    group.bench_function("wreath_R4", |b| b.iter(|| build_ball(black_box(&wreath), 4)));
    group.finish();
}

fn bench_exploration(c: &mut Criterion) {
    let free = parse_group("free:2").unwrap();
    let lazy = LazyBall::new(&free, 24).unwrap();
    let mut group = c.benchmark_group("explore");
    group.bench_function("free2_root_cluster_p0.3", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            let field = CouplingField::new(seed);
            let mut visits = 0u64;
            explore_cluster(&lazy, &field, 0.3, lazy.root(), u64::MAX, |_| {
                visits += 1;
                Flow::Continue
            });
            visits
        })
    });
    // materialized route for comparison
    let ball = free_ball(8);
    group.bench_function("free2_material_partition_p0.3", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            let field = CouplingField::new(seed);
            let config = sample(&ball, &field, 0.3).unwrap();
            clusters(&ball, &config).cluster_count()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_coupling,
    bench_union_find,
    bench_ball_build,
    bench_exploration
);
criterion_main!(benches);
