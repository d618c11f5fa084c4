//! Throughput of a small experiment matrix under the sequential executor
//! versus the rayon worker pool.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use gsa_harness::config::ExperimentConfig;
use gsa_harness::runner::{execute_collect, plan, RunTask};

const BENCH_CONFIG: &str = r#"
    [matrix.bench]
    algorithms = ["GSA_DIRECT", "GSA_ELITE_CONTEXT", "FLATTENED_DE", "FLATTENED_EA"]
    seeds = 4
    budget = 1500

    [[matrix.bench.cells]]
    benchmark = "typed_additive"
    dim = 12

    [[matrix.bench.cells]]
    benchmark = "typed_epistatic"
    dim = 12
    rho = 0.5
"#;

fn bench_tasks() -> Vec<RunTask> {
    let cfg = ExperimentConfig::parse(BENCH_CONFIG).expect("bench config parses");
    plan(&cfg, None).expect("bench plan")
}

fn matrix_throughput(c: &mut Criterion) {
    let tasks = bench_tasks();
    let mut group = c.benchmark_group("matrix");
    group.sample_size(10);

    group.bench_function("sequential", |b| {
        b.iter(|| black_box(execute_collect(black_box(&tasks), 1).expect("runs succeed")))
    });

    #[cfg(feature = "parallel")]
    {
        let workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(2);
        group.bench_function(format!("parallel_w{workers}"), |b| {
            b.iter(|| black_box(execute_collect(black_box(&tasks), workers).expect("runs succeed")))
        });
    }

    group.finish();
}

criterion_group!(benches, matrix_throughput);
criterion_main!(benches);
