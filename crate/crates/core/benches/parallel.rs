use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eigsign::harness::monte_carlo_algorithm1_with;
use eigsign::oracle::brute_force_signs_with;
use eigsign::problems::planted_problem;
use eigsign::{build_sign_system, Execution, MagnitudeLaw, RandomSource, RunConfig};

fn ensemble(c: &mut Criterion) {
    let problem = planted_problem(32, 3.0, MagnitudeLaw::FoldedGaussian, &mut RandomSource::new(0)).unwrap();
    let cfg = RunConfig::new(5_000, 32);
    let mut group = c.benchmark_group("ensemble_n32_64trials");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| monte_carlo_algorithm1_with(&problem, 64, &cfg, 1, exec).unwrap())
        });
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let problem = planted_problem(18, 3.0, MagnitudeLaw::FoldedGaussian, &mut RandomSource::new(0)).unwrap();
    let sys = build_sign_system(&problem).unwrap();
    let mut group = c.benchmark_group("brute_force_n18");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| brute_force_signs_with(&sys, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ensemble, brute_force);
criterion_main!(benches);
