use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use e6count::enumerate::count_total_with;
use e6count::surface::count_naive_with;
use e6count::{EnumConfig, Execution, Strategy};
use std::hint::black_box;
use std::time::Duration;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_torsor_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("torsor_residue");
    for b in [10_000u64, 100_000] {
        for (name, execution) in MODES {
            let cfg = EnumConfig {
                strategy: Strategy::Residue,
                execution,
                ..EnumConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, b), &b, |bench, &b| {
                bench.iter(|| count_total_with(black_box(b), &cfg).total)
            });
        }
    }
    group.finish();
}

fn bench_strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("strategy");
    let b = 10_000u64;
    for strategy in [Strategy::Direct, Strategy::Residue, Strategy::Auto] {
        let cfg = EnumConfig::with_strategy(strategy);
        group.bench_function(format!("{strategy:?}").to_lowercase(), |bench| {
            bench.iter(|| count_total_with(black_box(b), &cfg).total)
        });
    }
    group.finish();
}

fn bench_naive_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("naive");
    for (name, execution) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 1000), &1000u64, |bench, &b| {
            bench.iter(|| count_naive_with(black_box(b), execution).total)
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(5));
    targets = bench_torsor_modes, bench_strategies, bench_naive_modes
}
criterion_main!(benches);
