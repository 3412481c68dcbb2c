//! Subgraph-isomorphism micro-benchmark: deterministic instances, CSV out.

use std::time::Instant;

use crate::random::{random_graph, RandomSpec};
use crate::solver::{solve_si_with_stats, SolveBudget, SolveOutcome};

/// Instances measured per size.
pub const REPS: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiBenchRow {
    pub n: u32,
    pub instance: u32,
    pub nodes: u64,
    pub micros: u128,
    pub outcome: &'static str,
}

/// Measures [`REPS`] seeded subgraph-isomorphism instances per size: a
/// sparse pattern against an equally sized denser host. Instance generation
/// and all columns except the timing are deterministic in `seed`.
pub fn bench_si(sizes: &[u32], seed: u64, budget: SolveBudget) -> Vec<SiBenchRow> {
    let mut rows = Vec::new();
    for &n in sizes {
        assert!(n >= 2, "benchmark sizes start at 2");
        for rep in 0..REPS {
            let mix = seed ^ ((n as u64) << 32) ^ rep as u64;
            let pattern = random_graph(&RandomSpec { n, max_deg: 3, seed: mix })
                .expect("pattern generation");
            let host_cap = (n - 1).min(6).max(1);
            let host = random_graph(&RandomSpec { n, max_deg: host_cap, seed: mix.wrapping_add(1) })
                .expect("host generation");
            let start = Instant::now();
            let (outcome, nodes) = solve_si_with_stats(&pattern, &host, budget);
            let micros = start.elapsed().as_micros();
            let outcome = match outcome {
                SolveOutcome::Yes(_) => "yes",
                SolveOutcome::No => "no",
                SolveOutcome::Timeout(_) => "timeout",
            };
            rows.push(SiBenchRow { n, instance: rep, nodes, micros, outcome });
        }
    }
    rows
}

/// CSV with header. Timing is wall-clock noise; leave it out wherever the
/// output must be reproducible byte for byte.
pub fn to_csv(rows: &[SiBenchRow], with_timing: bool) -> String {
    let mut out = String::new();
    out.push_str(if with_timing { "n,instance,nodes,micros,outcome\n" } else { "n,instance,nodes,outcome\n" });
    for row in rows {
        if with_timing {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n, row.instance, row.nodes, row.micros, row.outcome
            ));
        } else {
            out.push_str(&format!("{},{},{},{}\n", row.n, row.instance, row.nodes, row.outcome));
        }
    }
    out
}
