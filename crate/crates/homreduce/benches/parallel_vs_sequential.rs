//! Compares the rayon-backed entry points against the same work composed
//! sequentially from the public per-item primitives. Built with default
//! features the left column is parallel; with `--no-default-features` both
//! columns run the sequential fallback and should coincide.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use homreduce::partition::BalanceParams;
use homreduce::pipeline::{verify_many, verify_pipeline, PipelineConfig};
use homreduce::random::{random_graph, RandomSpec};
use homreduce::reductions::{hom_to_si_instances, FamilyDecision};
use homreduce::solver::{solve_si, SolveBudget, SolveOutcome};
use homreduce::SimpleGraph;

fn si_family(c: &mut Criterion) {
    let g = SimpleGraph::cycle(5);
    let h = SimpleGraph::cycle(4);
    let family = hom_to_si_instances(&g, &h);
    let mut group = c.benchmark_group("si_family_or");
    group.bench_function("parallel_decide", |b| {
        b.iter(|| {
            let out = family.decide(SolveBudget::default());
            assert!(matches!(out, FamilyDecision::NoEmbedding));
            black_box(out)
        })
    });
    group.bench_function("sequential_compose", |b| {
        b.iter(|| {
            let any = family
                .iter()
                .any(|inst| matches!(solve_si(&g, &inst.host, SolveBudget::default()), SolveOutcome::Yes(_)));
            assert!(!any);
            black_box(any)
        })
    });
    group.finish();
}

fn pipeline_batch(c: &mut Criterion) {
    let jobs: Vec<(SimpleGraph, PipelineConfig)> = (0..8u64)
        .map(|seed| {
            let g = random_graph(&RandomSpec { n: 10, max_deg: 4, seed }).unwrap();
            let l = g.n() as u64;
            (g, PipelineConfig::relaxed(1, l, 4))
        })
        .collect();
    let mut group = c.benchmark_group("pipeline_batch");
    group.sample_size(10);
    group.bench_function("parallel_verify_many", |b| {
        b.iter(|| black_box(verify_many(&jobs)))
    });
    group.bench_function("sequential_compose", |b| {
        b.iter(|| {
            let out: Vec<_> = jobs.iter().map(|(g, cfg)| verify_pipeline(g, cfg)).collect();
            black_box(out)
        })
    });
    group.finish();
}

fn grouping_scaling(c: &mut Criterion) {
    let g = random_graph(&RandomSpec { n: 20_000, max_deg: 4, seed: 11 }).unwrap();
    let params = BalanceParams::relaxed(4);
    let mut group = c.benchmark_group("grouping");
    group.sample_size(10);
    group.bench_function("n_20000_l_2000", |b| {
        b.iter(|| {
            black_box(
                homreduce::partition::grouping_with_color_count(&g, 2, 2000, &params).unwrap(),
            )
        })
    });
    group.finish();
}

criterion_group!(benches, si_family, pipeline_batch, grouping_scaling);
criterion_main!(benches);
