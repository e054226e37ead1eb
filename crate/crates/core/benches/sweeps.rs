use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ebsim_core::experiments::mzi::{run_mzi, MziConfig};
use ebsim_core::experiments::neutron::{run_neutron_mzi, NeutronMziConfig};
use ebsim_core::Execution;

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let mzi = MziConfig {
        events_per_point: 2000,
        ..Default::default()
    };
    let neutron = NeutronMziConfig {
        events_per_point: 5000,
        ..Default::default()
    };
    for exec in [Execution::Sequential, Execution::Parallel] {
        let name = format!("{exec:?}");
        group.bench_with_input(BenchmarkId::new("mzi", &name), &exec, |b, &e| {
            b.iter(|| run_mzi(black_box(&mzi), e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("neutron_mzi", &name), &exec, |b, &e| {
            b.iter(|| run_neutron_mzi(black_box(&neutron), e).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
