//! Rigidity gadgets: the apex-over-cycle graph `D'`, its clique-anchored
//! variant `D`, the chain `T_k` of identified `D` blocks, and the matching
//! `A_h`, together with an exhaustive endomorphism enumerator that certifies
//! the rigidity claims by enumeration rather than trust.

use thiserror::Error;

use crate::graph::{assemble, SimpleGraph, Vertex};
use crate::solver::Witness;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("enumeration exceeded the node budget after {explored} nodes ({found} maps found)")]
    BudgetExceeded { explored: u64, found: usize },
}

/// Designated vertex sets of a gadget.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Anchors {
    /// Apex vertex of `D'`.
    pub apex: Option<Vertex>,
    /// Canonical clique of each block.
    pub cliques: Vec<Vec<Vertex>>,
    /// 5-cycle of each block, in cycle order.
    pub cycles: Vec<Vec<Vertex>>,
    /// Identification vertices `z_1..z_k` of a chain.
    pub zs: Vec<Vertex>,
    /// Matching endpoints `a_1..a_h`.
    pub a: Vec<Vertex>,
    /// Matching endpoints `b_1..b_h`.
    pub b: Vec<Vertex>,
}

/// A graph with named designated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredGraph {
    pub graph: SimpleGraph,
    pub anchors: Anchors,
}

impl AnchoredGraph {
    /// Checks the anchor invariants: anchors name valid vertices, canonical
    /// cliques induce cliques, cycle anchors induce 5-cycles.
    pub fn validate(&self) -> bool {
        let n = self.graph.n();
        let all = self
            .anchors
            .apex
            .iter()
            .chain(self.anchors.cliques.iter().flatten())
            .chain(self.anchors.cycles.iter().flatten())
            .chain(self.anchors.zs.iter())
            .chain(self.anchors.a.iter())
            .chain(self.anchors.b.iter());
        if !all.into_iter().all(|&v| v < n) {
            return false;
        }
        for clique in &self.anchors.cliques {
            for (i, &u) in clique.iter().enumerate() {
                for &v in &clique[i + 1..] {
                    if !self.graph.has_edge(u, v) {
                        return false;
                    }
                }
            }
        }
        for cycle in &self.anchors.cycles {
            if cycle.len() != 5 {
                return false;
            }
            for i in 0..5 {
                for j in i + 1..5 {
                    let consecutive = j == i + 1 || (i == 0 && j == 4);
                    if self.graph.has_edge(cycle[i], cycle[j]) != consecutive {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All homomorphisms of the underlying graph to itself.
    pub fn endomorphisms(&self, budget: u64) -> Result<Vec<Witness>, GadgetError> {
        endomorphisms(&self.graph, budget)
    }
}

/// The 6-vertex gadget: a 5-cycle `x_1..x_5` (vertices `0..5`) plus an apex
/// `z` (vertex `5`) adjacent to the whole cycle. Every endomorphism fixes `z`
/// and maps nothing else onto it.
pub fn build_d_prime() -> AnchoredGraph {
    let parts = [SimpleGraph::cycle(5), SimpleGraph::complete(1)];
    let extra: Vec<_> = (0..5).map(|i| ((1usize, 0), (0usize, i))).collect();
    let (graph, map) = assemble(&parts, &[], &extra).unwrap();
    let anchors = Anchors {
        apex: Some(map.resolve(1, 0)),
        cycles: vec![(0..5).map(|i| map.resolve(0, i)).collect()],
        ..Anchors::default()
    };
    AnchoredGraph { graph, anchors }
}

/// One chain block: the apex of `D'` replaced by a canonical clique
/// `K_{h+3}`, every clique vertex adjacent to all five cycle vertices.
/// Vertices `0..5` are the cycle, `5..h+8` the clique.
pub fn build_d(h: u32) -> AnchoredGraph {
    assert!(h >= 1);
    let parts = [SimpleGraph::cycle(5), SimpleGraph::complete(h + 3)];
    let mut extra = Vec::new();
    for c in 0..h + 3 {
        for x in 0..5 {
            extra.push(((1usize, c), (0usize, x)));
        }
    }
    let (graph, map) = assemble(&parts, &[], &extra).unwrap();
    let anchors = Anchors {
        cliques: vec![(0..h + 3).map(|c| map.resolve(1, c)).collect()],
        cycles: vec![(0..5).map(|x| map.resolve(0, x)).collect()],
        ..Anchors::default()
    };
    AnchoredGraph { graph, anchors }
}

/// The chain `T_k`: blocks `D_0..D_k`, where for each `i` in `1..=k` the
/// smallest canonical-clique vertex of `D_i` is identified with the smallest
/// 5-cycle vertex of `D_{i-1}`. The merged vertices are the anchors
/// `z_1..z_k`. `build_t(0, h)` is `build_d(h)`.
pub fn build_t(k: u32, h: u32) -> AnchoredGraph {
    assert!(h >= 1);
    let block = build_d(h);
    let clique_min = *block.anchors.cliques[0].iter().min().unwrap();
    let cycle_min = *block.anchors.cycles[0].iter().min().unwrap();

    let parts: Vec<SimpleGraph> = (0..=k).map(|_| block.graph.clone()).collect();
    let idents: Vec<_> = (1..=k as usize)
        .map(|i| ((i, clique_min), (i - 1, cycle_min)))
        .collect();
    let (graph, map) = assemble(&parts, &idents, &[]).unwrap();

    let mut anchors = Anchors::default();
    for i in 0..=k as usize {
        anchors
            .cliques
            .push(block.anchors.cliques[0].iter().map(|&v| map.resolve(i, v)).collect());
        anchors
            .cycles
            .push(block.anchors.cycles[0].iter().map(|&v| map.resolve(i, v)).collect());
    }
    anchors.zs = (1..=k as usize).map(|i| map.resolve(i, clique_min)).collect();
    AnchoredGraph { graph, anchors }
}

/// The matching `A_h` with edges `a_i b_i`: `a_i` is vertex `2i`, `b_i` is
/// vertex `2i + 1`.
pub fn build_a(h: u32) -> AnchoredGraph {
    assert!(h >= 1);
    let graph = SimpleGraph::new(2 * h, (0..h).map(|i| (2 * i, 2 * i + 1))).unwrap();
    let anchors = Anchors {
        a: (0..h).map(|i| 2 * i).collect(),
        b: (0..h).map(|i| 2 * i + 1).collect(),
        ..Anchors::default()
    };
    AnchoredGraph { graph, anchors }
}

/// Enumerates all homomorphisms `g -> g` by backtracking in natural vertex
/// order, pruning every candidate against the images of its already-assigned
/// neighbors. The result is sorted lexicographically by the image vector.
/// Each attempted assignment costs one unit of `budget`.
pub fn endomorphisms(g: &SimpleGraph, budget: u64) -> Result<Vec<Witness>, GadgetError> {
    let n = g.n() as usize;
    if n == 0 {
        return Ok(vec![Witness::new(Vec::new())]);
    }
    let words = n.div_ceil(64);
    let mut adj = vec![0u64; n * words];
    for (u, v) in g.edges() {
        adj[u as usize * words + (v as usize >> 6)] |= 1 << (v & 63);
        adj[v as usize * words + (u as usize >> 6)] |= 1 << (u & 63);
    }
    // Neighbors preceding each vertex are exactly the ones already assigned
    // when it is reached.
    let earlier: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v as Vertex).iter().map(|&u| u as usize).filter(|&u| u < v).collect())
        .collect();

    let full: Vec<u64> = (0..words)
        .map(|w| {
            let lo = w * 64;
            let hi = (lo + 64).min(n);
            if hi == lo + 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            }
        })
        .collect();

    let mut out = Vec::new();
    let mut image = vec![0 as Vertex; n];
    let mut explored = 0u64;
    let mut stack: Vec<Vec<u64>> = Vec::with_capacity(n + 1);

    // Iterative DFS: stack[d] holds the still-untried candidates for vertex d.
    let candidates = |image: &[Vertex], d: usize| -> Vec<u64> {
        let mut cand = full.clone();
        for &u in &earlier[d] {
            let row = image[u] as usize;
            for w in 0..words {
                cand[w] &= adj[row * words + w];
            }
        }
        cand
    };
    stack.push(candidates(&image, 0));
    while !stack.is_empty() {
        let d = stack.len() - 1;
        let Some(x) = pop_lowest_bit(stack.last_mut().unwrap()) else {
            stack.pop();
            continue;
        };
        explored += 1;
        if explored > budget {
            return Err(GadgetError::BudgetExceeded { explored, found: out.len() });
        }
        image[d] = x;
        if d + 1 == n {
            out.push(Witness::new(image.clone()));
        } else {
            let next = candidates(&image, d + 1);
            stack.push(next);
        }
    }
    Ok(out)
}

fn pop_lowest_bit(words: &mut [u64]) -> Option<Vertex> {
    for (w, word) in words.iter_mut().enumerate() {
        if *word != 0 {
            let b = word.trailing_zeros();
            *word &= *word - 1;
            return Some(((w as u32) << 6) | b);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all n^n maps, the oracle for the enumerator.
    fn brute_endomorphisms(g: &SimpleGraph) -> Vec<Vec<Vertex>> {
        let n = g.n() as usize;
        let mut out = Vec::new();
        let mut map = vec![0 as Vertex; n];
        loop {
            if g.edges().all(|(u, v)| g.has_edge(map[u as usize], map[v as usize])) {
                out.push(map.clone());
            }
            let mut d = n;
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                if map[d] + 1 < n as Vertex {
                    map[d] += 1;
                    map[d + 1..].fill(0);
                    break;
                }
            }
        }
    }

    #[test]
    fn k3_has_six_bijective_endomorphisms() {
        let k3 = SimpleGraph::complete(3);
        let endos = endomorphisms(&k3, 1_000_000).unwrap();
        assert_eq!(endos.len(), 6);
        for w in &endos {
            let mut img: Vec<_> = w.as_slice().to_vec();
            img.sort_unstable();
            assert_eq!(img, vec![0, 1, 2]);
        }
        let brute = brute_endomorphisms(&k3);
        assert_eq!(endos.iter().map(|w| w.as_slice().to_vec()).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn c5_has_ten_endomorphisms() {
        let c5 = SimpleGraph::cycle(5);
        let endos = endomorphisms(&c5, 1_000_000).unwrap();
        let brute = brute_endomorphisms(&c5);
        assert_eq!(endos.len(), 10);
        assert_eq!(endos.iter().map(|w| w.as_slice().to_vec()).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let err = endomorphisms(&SimpleGraph::cycle(5), 4).unwrap_err();
        assert!(matches!(err, GadgetError::BudgetExceeded { explored: 5, .. }));
    }

    #[test]
    fn d_prime_shape() {
        let d = build_d_prime();
        assert!(d.validate());
        assert_eq!(d.graph.n(), 6);
        assert_eq!(d.graph.m(), 10);
        assert_eq!(d.graph.degree(d.anchors.apex.unwrap()), 5);
    }

    #[test]
    fn d_prime_endomorphisms_fix_apex() {
        let d = build_d_prime();
        let z = d.anchors.apex.unwrap();
        let endos = d.endomorphisms(10_000_000).unwrap();
        assert!(!endos.is_empty());
        for w in &endos {
            assert_eq!(w.image(z), z);
            for &x in &d.anchors.cycles[0] {
                assert_ne!(w.image(x), z);
            }
        }
        // Cross-check the whole list against brute force over 6^6 maps.
        let brute = brute_endomorphisms(&d.graph);
        assert_eq!(endos.iter().map(|w| w.as_slice().to_vec()).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn block_counts() {
        assert_eq!(build_d(3).graph.n(), 11);
        assert_eq!(build_d(1).anchors.cliques[0].len(), 4);
        for h in 1..=4u32 {
            let d = build_d(h);
            assert!(d.validate());
            let expected = (h + 3) * (h + 2) / 2 + 5 * (h + 3) + 5;
            assert_eq!(d.graph.m() as u32, expected, "h = {h}");
        }
    }

    #[test]
    fn chain_counts_and_anchors() {
        assert_eq!(build_t(0, 2), build_d(2));
        for (k, h) in [(1u32, 1u32), (2, 1), (3, 2)] {
            let t = build_t(k, h);
            assert!(t.validate(), "k={k} h={h}");
            assert_eq!(t.graph.n(), (k + 1) * (h + 8) - k, "k={k} h={h}");
            assert_eq!(t.anchors.zs.len(), k as usize);
            // z_i sits in the clique of block i and on the cycle of block i-1.
            for (i, &z) in t.anchors.zs.iter().enumerate() {
                assert!(t.anchors.cliques[i + 1].contains(&z));
                assert!(t.anchors.cycles[i].contains(&z));
            }
        }
    }

    #[test]
    fn matching_shape() {
        let a = build_a(3);
        assert_eq!(a.graph.n(), 6);
        assert_eq!(a.graph.m(), 3);
        assert_eq!(a.graph.max_degree(), 1);
        assert_eq!(build_a(1).graph, SimpleGraph::complete(2));
        for i in 0..3 {
            assert!(a.graph.has_edge(a.anchors.a[i], a.anchors.b[i]));
        }
    }

    #[test]
    fn builders_are_deterministic() {
        assert_eq!(build_d_prime(), build_d_prime());
        assert_eq!(build_t(2, 2), build_t(2, 2));
        assert_eq!(build_a(4), build_a(4));
    }
}
