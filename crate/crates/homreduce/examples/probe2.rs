use std::time::Instant;
use homreduce::graph::{SimpleGraph, Vertex};
use homreduce::reductions::{listhom_to_hom, ListHomInstance};
use homreduce::solver::{solve_hom_with_stats, SolveBudget};

struct Mix(u64);
impl Mix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    fn below(&mut self, b: u64) -> u64 { self.next() % b.max(1) }
}

fn bern(mix: &mut Mix, n: u32, pm: u64) -> SimpleGraph {
    let mut edges = Vec::new();
    for u in 0..n { for v in u+1..n { if mix.below(1000) < pm { edges.push((u,v)); } } }
    SimpleGraph::new(n, edges).unwrap()
}

fn main() {
    let mut mix = Mix(0x5000);
    let mut worst = std::time::Duration::ZERO;
    let mut total_nodes = 0u64;
    let t_all = Instant::now();
    for case in 0..110 {
        let n = 1 + mix.below(6) as u32;
        let h = 2 + mix.below(2) as u32;
        let pattern = bern(&mut mix, n, 500);
        let target = bern(&mut mix, h, 700);
        let lists: Vec<Vec<Vertex>> = (0..n).map(|_| (0..h).filter(|_| mix.below(100) < 60).collect()).collect();
        let inst = ListHomInstance::new(pattern, target, lists).unwrap();
        let red = listhom_to_hom(&inst).unwrap();
        let t = Instant::now();
        let (out, nodes) = solve_hom_with_stats(&red.pattern, &red.target, SolveBudget::default());
        let el = t.elapsed();
        total_nodes += nodes;
        if el > worst { worst = el; eprintln!("case {case}: n={n} h={h} sizes=({},{}) nodes={nodes} {:?} dec={:?}", red.pattern.n(), red.target.n(), el, out.decision()); }
    }
    eprintln!("110 cases done in {:?}, total nodes {total_nodes}, worst {:?}", t_all.elapsed(), worst);
}
