//! Property tests for the text formats and a couple of structural
//! invariants that want generated inputs.

use proptest::prelude::*;

use homreduce::graph::{greedy_coloring, SimpleGraph, Vertex};
use homreduce::io::{read_graph, read_lists, write_graph, write_lists};

fn arb_graph() -> impl Strategy<Value = SimpleGraph> {
    (1u32..20).prop_flat_map(|n| {
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs, 0..=usize::min(40, n as usize * (n as usize - 1) / 2))
            .prop_map(move |edges| SimpleGraph::new(n, edges).unwrap())
    })
}

proptest! {
    #[test]
    fn graph_text_roundtrips(g in arb_graph()) {
        let text = write_graph(&g);
        let back = read_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        // Writer output is canonical: a second trip is bit-identical.
        prop_assert_eq!(write_graph(&back), text);
    }

    #[test]
    fn list_text_roundtrips(lists in proptest::collection::vec(
        proptest::collection::btree_set(0u32..9, 0..6), 1..12
    )) {
        let lists: Vec<Vec<Vertex>> = lists.into_iter().map(|s| s.into_iter().collect()).collect();
        let text = write_lists(&lists);
        let back = read_lists(&text, lists.len() as u32, 9).unwrap();
        prop_assert_eq!(&back, &lists);
        prop_assert_eq!(write_lists(&back), text);
    }

    #[test]
    fn greedy_coloring_is_proper_within_bound(g in arb_graph()) {
        let order: Vec<Vertex> = (0..g.n()).collect();
        let c = greedy_coloring(&g, &order).unwrap();
        prop_assert!(c.is_proper_on(&g));
        prop_assert!(c.color_count() as usize <= g.max_degree() + 1);
    }

    #[test]
    fn square_contains_base_edges(g in arb_graph()) {
        let sq = g.square();
        for (u, v) in g.edges() {
            prop_assert!(sq.has_edge(u, v));
        }
    }
}
