use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fdnet_core::config::{ExperimentConfig, ExperimentKind};
use fdnet_core::harness::{run_experiment_with, Exec};

fn configs() -> Vec<(&'static str, ExperimentConfig)> {
    let mut mimo = ExperimentConfig::defaults(ExperimentKind::MimoSelection);
    mimo.trials = 2_000;
    mimo.sweep.values = vec![5.0];

    let mut ofdma = ExperimentConfig::defaults(ExperimentKind::OfdmaMatching);
    ofdma.trials = 200;
    ofdma.ofdma.users = 4;
    ofdma.ofdma.subcarriers = 6;
    ofdma.sweep.values = vec![10.0];

    let mut relay = ExperimentConfig::defaults(ExperimentKind::RelaySelection);
    relay.trials = 2_000;
    relay.sweep.values = vec![8.0];

    vec![("mimo_selection", mimo), ("ofdma_matching", ofdma), ("relay_selection", relay)]
}

fn sequential_vs_parallel(c: &mut Criterion) {
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for (name, cfg) in configs() {
        group.bench_with_input(BenchmarkId::new("sequential", name), &cfg, |b, cfg| {
            b.iter(|| run_experiment_with(cfg, Exec::Sequential).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", name), &cfg, |b, cfg| {
            b.iter(|| run_experiment_with(cfg, Exec::Parallel).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sequential_vs_parallel);
criterion_main!(benches);
