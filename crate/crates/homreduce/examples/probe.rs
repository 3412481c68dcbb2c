use std::time::Instant;
use homreduce::graph::SimpleGraph;
use homreduce::partition::BalanceParams;
use homreduce::reductions::{col_to_listhom_with_color_count, listhom_to_hom};
use homreduce::solver::{solve_hom_with_stats, solve_listhom, SolveBudget};

fn main() {
    for (name, g, l) in [("K3", SimpleGraph::complete(3), 3u64), ("K4", SimpleGraph::complete(4), 4)] {
        let params = BalanceParams::relaxed(g.max_degree() as u32);
        let t0 = Instant::now();
        let red = col_to_listhom_with_color_count(&g, 1, l, &params, true).unwrap();
        println!("{name}: listhom pattern={} target={} ({:?})", red.instance.pattern().n(), red.instance.target().n(), t0.elapsed());
        let t0 = Instant::now();
        let lh = solve_listhom(&red.instance, SolveBudget::default());
        println!("{name}: listhom decision={:?} ({:?})", lh.decision(), t0.elapsed());
        let t0 = Instant::now();
        let hr = listhom_to_hom(&red.instance).unwrap();
        println!("{name}: hom pattern={} target={} ({:?})", hr.pattern.n(), hr.target.n(), t0.elapsed());
        let t0 = Instant::now();
        let (out, nodes) = solve_hom_with_stats(&hr.pattern, &hr.target, SolveBudget::nodes(3_000_000));
        println!("{name}: hom decision={:?} nodes={nodes} ({:?})", out.decision(), t0.elapsed());
    }
}
