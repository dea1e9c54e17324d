//! Compares suite-cell execution through the worker pool against the plain
//! sequential loop on a small batch of independent training runs.
//!
//! On multi-core hosts the pooled path should win roughly linearly in core
//! count; on a single core the two are expected to tie (the pool adds only
//! dispatch overhead). Either way the outputs are identical — a suite's
//! numbers never depend on how it was scheduled.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use fpg_core::bench::MetricsRecord;
use fpg_core::envs::EnvKind;
use fpg_core::par::{map_items, map_sequential, parallel_enabled};
use fpg_core::trainer::{train, Algo, TrainConfig};

fn workload() -> Vec<TrainConfig> {
    (0..4u64)
        .map(|seed| {
            let mut config = TrainConfig::defaults_for(EnvKind::CartPole, Algo::Fpg, seed);
            config.max_episodes = 25;
            config.hidden = 8;
            config.minibatch = 16;
            config
        })
        .collect()
}

fn run_cell(config: TrainConfig) -> Vec<MetricsRecord> {
    train(&config).expect("benchmark config is valid").metrics
}

fn bench_suite_execution(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite_cells_4x25ep");
    group.sample_size(10);
    let label = if parallel_enabled() { "worker_pool" } else { "worker_pool_disabled" };
    group.bench_function(label, |b| {
        b.iter_batched(
            workload,
            |jobs| black_box(map_items(jobs, 0, run_cell)),
            BatchSize::LargeInput,
        )
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(
            workload,
            |jobs| black_box(map_sequential(jobs, run_cell)),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_suite_execution);
criterion_main!(benches);
