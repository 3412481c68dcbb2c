//! Randomized cross-checks of the reductions against the brute-force
//! reference deciders, plus solver invariants.

use homreduce::graph::{SimpleGraph, Vertex};
use homreduce::naive;
use homreduce::partition::BalanceParams;
use homreduce::pipeline::{verify_pipeline, PipelineConfig, Verdict};
use homreduce::random::{random_graph, RandomSpec};
use homreduce::reductions::{
    col_to_listhom_with_color_count, hom_to_si_instances, lift_witness, listhom_to_hom,
    project_witness, FamilyDecision, ListHomInstance,
};
use homreduce::solver::{
    check_witness, solve_hom, solve_kcol, solve_li_hom, solve_listhom, solve_si, Problem,
    SolveBudget, SolveOutcome,
};

/// Splitmix-style generator, good enough to derive test instances.
struct Mix(u64);

impl Mix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound.max(1)
    }
}

fn bernoulli_graph(mix: &mut Mix, n: u32, permille: u64) -> SimpleGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if mix.below(1000) < permille {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::new(n, edges).unwrap()
}

/// First relaxed color count in the ladder for which the grouping pipeline
/// accepts the graph.
fn reduce_with_ladder(
    g: &SimpleGraph,
    trim: bool,
) -> homreduce::reductions::ColToListHom {
    let params = BalanceParams::relaxed(g.max_degree() as u32);
    let n = g.n() as u64;
    for l in [n.div_ceil(2), n, 4 * n] {
        if let Ok(red) = col_to_listhom_with_color_count(g, 1, l.max(1), &params, trim) {
            return red;
        }
    }
    panic!("no ladder color count produced a grouping for n = {n}");
}

#[test]
fn coloring_reduction_agrees_with_oracles() {
    let mut failures = Vec::new();
    for seed in 0..40u64 {
        let n = 6 + (seed % 7) as u32;
        let g = random_graph(&RandomSpec { n, max_deg: 4, seed: 900 + seed }).unwrap();
        let red = reduce_with_ladder(&g, true);
        let expect = naive::kcol(&g, 3).is_some();
        let got = naive::listhom(&red.instance).is_some();
        if expect != got {
            failures.push((seed, expect, got));
        }
    }
    assert!(failures.is_empty(), "disagreements: {failures:?}");
}

#[test]
fn trim_preserves_satisfiability() {
    for seed in 0..15u64 {
        let g = random_graph(&RandomSpec { n: 7, max_deg: 3, seed: 40 + seed }).unwrap();
        let params = BalanceParams::relaxed(3);
        let trimmed = col_to_listhom_with_color_count(&g, 1, 7, &params, true).unwrap();
        let full = col_to_listhom_with_color_count(&g, 1, 7, &params, false).unwrap();
        assert_eq!(
            naive::listhom(&trimmed.instance).is_some(),
            naive::listhom(&full.instance).is_some(),
            "seed {seed}"
        );
    }
}

#[test]
fn listhom_witnesses_are_locally_injective_on_the_pattern() {
    for seed in 0..25u64 {
        let g = random_graph(&RandomSpec { n: 8, max_deg: 4, seed: 300 + seed }).unwrap();
        let red = reduce_with_ladder(&g, true);
        if let SolveOutcome::Yes(w) = solve_listhom(&red.instance, SolveBudget::default()) {
            check_witness(
                &Problem::LocallyInjectiveHom {
                    pattern: red.instance.pattern(),
                    target: red.instance.target(),
                },
                &w,
            )
            .unwrap_or_else(|v| panic!("seed {seed}: not locally injective: {v}"));
        }
    }
}

fn random_listhom(mix: &mut Mix) -> ListHomInstance {
    let n = 1 + mix.below(6) as u32;
    let h = 2 + mix.below(2) as u32;
    let pattern = bernoulli_graph(mix, n, 500);
    let target = bernoulli_graph(mix, h, 700);
    let lists: Vec<Vec<Vertex>> = (0..n)
        .map(|_| (0..h).filter(|_| mix.below(100) < 60).collect())
        .collect();
    ListHomInstance::new(pattern, target, lists).unwrap()
}

#[test]
fn gadget_reduction_agrees_with_oracles() {
    let mut mix = Mix(0xfeed);
    for case in 0..30 {
        let inst = random_listhom(&mut mix);
        let red = listhom_to_hom(&inst).unwrap();
        let direct = naive::listhom(&inst);
        let via_hom = solve_hom(&red.pattern, &red.target, SolveBudget::default());
        assert_eq!(
            direct.is_some(),
            matches!(via_hom, SolveOutcome::Yes(_)),
            "case {case}"
        );
        if let Some(w) = direct {
            let lifted = lift_witness(&inst, &w, &red).unwrap();
            let back = project_witness(&red, &inst, &lifted).unwrap();
            assert_eq!(back, w, "case {case}: lift/project roundtrip");
        }
        if let SolveOutcome::Yes(hw) = via_hom {
            project_witness(&red, &inst, &hw)
                .unwrap_or_else(|e| panic!("case {case}: projection failed: {e}"));
        }
    }
}

#[test]
fn si_family_or_equals_hom() {
    let mut mix = Mix(0xabcd);
    for case in 0..25 {
        let n = 2 + mix.below(4) as u32;
        let h = 1 + mix.below(3) as u32;
        let g = bernoulli_graph(&mut mix, n, 550);
        let target = bernoulli_graph(&mut mix, h, 650);
        let family = hom_to_si_instances(&g, &target);
        let direct = naive::hom(&g, &target).is_some();
        let decided = family.decide(SolveBudget::default());
        let by_family = matches!(decided, FamilyDecision::Embeds { .. });
        assert_eq!(direct, by_family, "case {case}");
        let count = family.iter().count() as u128;
        assert_eq!(count, family.family_size(), "case {case}");
        assert!(count <= 1u128 << (n as u64 + h as u64), "case {case}: above 2^n");
    }
}

#[test]
fn pattern_edge_monotonicity() {
    // Adding pattern edges never turns a No into a Yes.
    let mut mix = Mix(0x5151);
    for case in 0..20 {
        let n = 3 + mix.below(4) as u32;
        let h = bernoulli_graph(&mut mix, 2 + mix.below(3) as u32, 600);
        let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
        let mut pool: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        // Deterministic shuffle.
        for i in (1..pool.len()).rev() {
            pool.swap(i, mix.below(i as u64 + 1) as usize);
        }
        let mut last = solve_hom(&SimpleGraph::edgeless(n), &h, SolveBudget::default())
            .decision()
            .unwrap();
        for (u, v) in pool {
            edges.push((u, v));
            let g = SimpleGraph::new(n, edges.clone()).unwrap();
            let now = solve_hom(&g, &h, SolveBudget::default()).decision().unwrap();
            assert!(!(now && !last) || last, "case {case}: No flipped to Yes");
            if !last {
                assert!(!now, "case {case}: No flipped to Yes after adding ({u},{v})");
            }
            last = now;
        }
    }
}

#[test]
fn solvers_match_naive_enumeration() {
    let mut mix = Mix(0x77aa);
    for case in 0..60 {
        let n = 2 + mix.below(4) as u32;
        let h = 2 + mix.below(4) as u32;
        let g = bernoulli_graph(&mut mix, n, 400 + mix.below(300));
        let t = bernoulli_graph(&mut mix, h, 400 + mix.below(300));
        let b = SolveBudget::default();
        assert_eq!(
            solve_hom(&g, &t, b).decision().unwrap(),
            naive::hom(&g, &t).is_some(),
            "hom case {case}"
        );
        assert_eq!(
            solve_li_hom(&g, &t, b).decision().unwrap(),
            naive::li_hom(&g, &t).is_some(),
            "li case {case}"
        );
        assert_eq!(
            solve_si(&g, &t, b).decision().unwrap(),
            naive::si(&g, &t).is_some(),
            "si case {case}"
        );
        let k = 1 + mix.below(4) as u32;
        assert_eq!(
            solve_kcol(&g, k, b).decision().unwrap(),
            naive::kcol(&g, k).is_some(),
            "kcol case {case}"
        );
    }
}

#[test]
fn pipeline_random_suite_has_no_disagreements() {
    // The homomorphism stage grows quadratically in the list-hom target, so
    // cap its search; exhausted budgets read as inconclusive, never as
    // disagreement.
    for seed in 0..20u64 {
        let n = 4 + (seed % 3) as u32;
        let g = random_graph(&RandomSpec { n, max_deg: 4, seed: 7000 + seed }).unwrap();
        let mut config = PipelineConfig::relaxed(1, g.n() as u64, 4);
        config.budget = SolveBudget::nodes(60_000);
        let report = verify_pipeline(&g, &config);
        assert_ne!(report.verdict, Verdict::Disagreement, "seed {seed}: {report}");
        assert!(report.witnesses_ok(), "seed {seed}: {report}");
    }
}
