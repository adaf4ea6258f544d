//! Frontier-search benchmarks: the sequential path (one worker) against the
//! rayon-parallel path on the same workloads.
//!
//! With `--no-default-features` only the sequential variants are compiled.
//! On a single-core host the two paths are expected to tie; the comparison
//! is meaningful on multi-core hardware.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kcm::{
    east1d, explore, fa1f, make_box, make_pn, origin_reachable, BoundaryMode, BoxSpec, Domain,
    SearchCaps, UpdateFamily,
};

fn caps(workers: usize) -> SearchCaps {
    SearchCaps {
        max_states: 1 << 26,
        workers,
    }
}

fn worker_counts() -> Vec<usize> {
    #[cfg(feature = "parallel")]
    {
        vec![1, 0]
    }
    #[cfg(not(feature = "parallel"))]
    {
        vec![1]
    }
}

fn label(workers: usize) -> &'static str {
    if workers == 1 {
        "sequential"
    } else {
        "parallel"
    }
}

fn enumerate_states(
    family: &UpdateFamily,
    domain: &Arc<Domain>,
    budget: u32,
    workers: usize,
) -> u64 {
    let report = explore(
        family,
        domain,
        budget,
        BoundaryMode::OutsideAllZero,
        None,
        false,
        &caps(workers),
    );
    report.v_n_size.expect("no truncation in benches")
}

/// Full enumeration on the East induction windows (harness-shaped work).
fn bench_east_windows(c: &mut Criterion) {
    let east = east1d();
    let mut group = c.benchmark_group("east_window_enumeration");
    for n in [3u32, 4] {
        let window = Arc::new(make_pn(n, 1, 1, None).unwrap());
        for workers in worker_counts() {
            group.bench_with_input(
                BenchmarkId::new(label(workers), format!("n={n}")),
                &workers,
                |b, &workers| b.iter(|| enumerate_states(&east, &window, n, workers)),
            );
        }
    }
    group.finish();
}

/// Long one-dimensional FA1f lines: many levels with modest frontiers.
fn bench_fa1f_line(c: &mut Criterion) {
    let fam = fa1f(1);
    let domain = Arc::new(make_box(&BoxSpec::interval(-120, 120).unwrap()));
    let mut group = c.benchmark_group("fa1f_line_enumeration");
    group.sample_size(10);
    for workers in worker_counts() {
        group.bench_with_input(
            BenchmarkId::new(label(workers), "N=120 n=3"),
            &workers,
            |b, &workers| b.iter(|| enumerate_states(&fam, &domain, 3, workers)),
        );
    }
    group.finish();
}

/// Two-dimensional FA1f boxes: wide frontiers with heavy per-state work.
fn bench_fa1f_plane(c: &mut Criterion) {
    let fam = fa1f(2);
    let mut group = c.benchmark_group("fa1f_plane_enumeration");
    group.sample_size(10);
    for (half_width, budget) in [(9i64, 2u32), (6, 3)] {
        let domain = Arc::new(make_box(
            &BoxSpec::hypercube(2, -half_width, half_width).unwrap(),
        ));
        for workers in worker_counts() {
            group.bench_with_input(
                BenchmarkId::new(label(workers), format!("N={half_width} n={budget}")),
                &workers,
                |b, &workers| b.iter(|| enumerate_states(&fam, &domain, budget, workers)),
            );
        }
    }
    group.finish();
}

/// Targeted reachability with certificates, the CLI-shaped query.
fn bench_targeted_reach(c: &mut Criterion) {
    let fam = fa1f(1);
    let domain = Arc::new(make_box(&BoxSpec::interval(-40, 40).unwrap()));
    let mut group = c.benchmark_group("fa1f_origin_reach");
    for workers in worker_counts() {
        group.bench_with_input(
            BenchmarkId::new(label(workers), "N=40 n=2"),
            &workers,
            |b, &workers| {
                b.iter(|| {
                    let report = origin_reachable(
                        &fam,
                        &domain,
                        2,
                        BoundaryMode::OutsideAllZero,
                        true,
                        &caps(workers),
                    )
                    .unwrap();
                    assert!(report.reached_target);
                    report.states_visited
                })
            },
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_east_windows,
    bench_fa1f_line,
    bench_fa1f_plane,
    bench_targeted_reach
);
criterion_main!(benches);
