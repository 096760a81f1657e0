//! Sequential against parallel execution of the exhaustive checks.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use incidence_core::corpus::{full_simplex, path_non_simplicial, simplicial_maps, tetrahedron_boundary};
use incidence_core::stories::{sigma_rank, verify_differential_ideal};
use incidence_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn ideal(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_differential_ideal");
    group.sample_size(10);
    for (name, complex) in [("tetrahedron-boundary", tetrahedron_boundary()), ("4-simplex", full_simplex(5))] {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &complex, |b, k| {
                b.iter(|| verify_differential_ideal(k, 3, 0, exec))
            });
        }
    }
    group.finish();
}

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("sigma_rank_degree_3");
    group.sample_size(10);
    let complex = full_simplex(5);
    for (mode, exec) in MODES {
        group.bench_function(mode, |b| b.iter(|| sigma_rank(&complex, 3, exec)));
    }
    group.finish();
}

fn maps(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_differentiable");
    group.sample_size(10);
    let mut corpus: Vec<_> = simplicial_maps().into_iter().map(|(_, m)| m).collect();
    corpus.push(path_non_simplicial());
    for (mode, exec) in MODES {
        group.bench_function(mode, |b| {
            b.iter(|| corpus.iter().map(|m| m.check_differentiable(2, exec).passed()).filter(|&ok| ok).count())
        });
    }
    group.finish();
}

criterion_group!(benches, ideal, rank, maps);
criterion_main!(benches);
