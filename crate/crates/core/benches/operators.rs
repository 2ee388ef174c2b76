use condset::corpus::Generator;
use condset::exec::{self, Mode};
use condset::randset::{cond_core, cond_expectation, cond_hull};
use condset::risk::avar_sub;
use condset::suite::{run_suite, SuiteConfig};
use condset::{Partition, RandomPolyhedron};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn in_mode<R>(mode: Mode, f: impl FnOnce() -> R) -> R {
    match mode {
        Mode::Sequential => exec::sequential(f),
        Mode::Parallel => f(),
    }
}

fn workload(points: usize, d: usize) -> (RandomPolyhedron, Partition) {
    let mut g = Generator::new(11);
    let inst = loop {
        let inst = g.bounded_instance(d, points, true);
        if inst.x.len() == points {
            break inst;
        }
    };
    (inst.x, inst.h)
}

fn operators(c: &mut Criterion) {
    let (x, h) = workload(6, 2);
    let alpha = condset::rational::rat(1, 3);
    let mut group = c.benchmark_group("operators");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new("core", name), |b| {
            b.iter(|| in_mode(mode, || cond_core(black_box(&x), &h).unwrap()))
        });
        group.bench_function(BenchmarkId::new("hull", name), |b| {
            b.iter(|| in_mode(mode, || cond_hull(black_box(&x), &h).unwrap()))
        });
        group.bench_function(BenchmarkId::new("expectation", name), |b| {
            b.iter(|| in_mode(mode, || cond_expectation(black_box(&x), &h).unwrap()))
        });
        group.bench_function(BenchmarkId::new("avar", name), |b| {
            b.iter(|| in_mode(mode, || avar_sub(black_box(&x), &h, &alpha).unwrap()))
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let config = SuiteConfig {
        instances: 8,
        ..SuiteConfig::default()
    };
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| run_suite(black_box(5), mode, &config)));
    }
    group.finish();
}

criterion_group!(benches, operators, suite);
criterion_main!(benches);
