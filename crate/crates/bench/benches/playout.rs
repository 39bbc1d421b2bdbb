use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use ddtree_bench::bridge_deals;
use ddtree_core::bounds::{expected_frank_bound_exact, DEFAULT_SHAPE_CAP};
use ddtree_core::engine::{random_playout_into, run_playout, PlayoutTrace};
use ddtree_core::estimator::{branching_profile, RunSpec};
use ddtree_core::rng::{game_rng, seeded};
use ddtree_core::{Deal, GameParams};

fn dealing(c: &mut Criterion) {
    let params = GameParams::bridge();
    let mut rng = seeded(1);
    c.bench_function("deal/random_bridge", |b| b.iter(|| Deal::random(&params, &mut rng)));
}

fn playouts(c: &mut Criterion) {
    let deals = bridge_deals(1024, 3);
    let mut group = c.benchmark_group("playout");
    group.throughput(Throughput::Elements(1));
    for (name, params) in [("nt", GameParams::bridge()), ("trump", GameParams::bridge().with_trump(Some(0)).unwrap())] {
        let mut rng = seeded(2);
        let mut i = 0;
        group.bench_function(format!("kernel_{name}"), |b| {
            b.iter(|| {
                i = (i + 1) % deals.len();
                let mut product = 1.0f64;
                run_playout(deals[i].hands(), &params, 0, &mut rng, |_, d, _| product *= d as f64);
                black_box(product)
            })
        });
        let mut trace = PlayoutTrace::with_capacity(params.game_length());
        group.bench_function(format!("traced_{name}"), |b| {
            b.iter(|| {
                i = (i + 1) % deals.len();
                random_playout_into(&deals[i], &params, 0, &mut rng, &mut trace);
                black_box(trace.degrees.len())
            })
        });
    }
    group.finish();
}

fn experiments(c: &mut Criterion) {
    let params = GameParams::bridge();
    let mut group = c.benchmark_group("experiment");
    group.sample_size(10);
    group.throughput(Throughput::Elements(10_000));
    group.bench_function("profile_10k", |b| {
        b.iter_batched(
            || RunSpec::new(10_000, 5).workers(1),
            |spec| branching_profile(&params, &spec).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();

    let mut group = c.benchmark_group("experiment");
    group.bench_function("expected_frank_exact", |b| {
        b.iter(|| expected_frank_bound_exact(&params, DEFAULT_SHAPE_CAP).unwrap())
    });
    group.throughput(Throughput::Elements(1));
    group.bench_function("deal_and_play", |b| {
        let mut g = 0;
        b.iter(|| {
            g += 1;
            let mut rng = game_rng(9, g);
            let deal = Deal::random(&params, &mut rng);
            run_playout(deal.hands(), &params, 0, &mut rng, |_, _, _| {})
        })
    });
    group.finish();
}

criterion_group!(benches, dealing, playouts, experiments);
criterion_main!(benches);
