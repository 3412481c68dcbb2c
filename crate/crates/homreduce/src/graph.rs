//! Immutable simple graphs and the structural primitives the rest of the
//! crate is built on: squaring, greedy coloring, greedy independent sets and
//! gadget assembly.

use std::fmt;

use thiserror::Error;

/// Dense vertex identifier. Vertices of an `n`-vertex graph are `0..n`.
pub type Vertex = u32;

/// Color identifier. Colors of an `L`-coloring are `1..=L`.
pub type Color = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a self-loop")]
    LoopEdge(Vertex, Vertex),
    #[error("edge ({0}, {1}) occurs more than once")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(Vertex, u32),
    #[error("handle (part {part}, vertex {vertex}) does not name a vertex")]
    InvalidHandle { part: usize, vertex: Vertex },
    #[error("identification or extra edge produced a self-loop at merged vertex {0}")]
    SelfLoopProduced(Vertex),
    #[error("order is not a permutation of the vertex set")]
    InvalidPermutation,
}

/// An undirected simple graph: no loops, no parallel edges.
///
/// Immutable after construction; all transformations return new values.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: u32,
    m: usize,
    adj: Vec<Vec<Vertex>>,
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, m={}, edges={:?})", self.n, self.m, self.edges().collect::<Vec<_>>())
    }
}

impl SimpleGraph {
    /// Builds a graph from an explicit edge list, rejecting loops, duplicate
    /// edges and out-of-range endpoints.
    pub fn new(n: u32, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n as usize];
        let mut m = 0usize;
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::LoopEdge(u, v));
            }
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let v = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(GraphError::DuplicateEdge(u as Vertex, v));
            }
        }
        Ok(SimpleGraph { n, m, adj })
    }

    /// Graph with `n` vertices and no edges.
    pub fn edgeless(n: u32) -> Self {
        SimpleGraph { n, m: 0, adj: vec![Vec::new(); n as usize] }
    }

    /// Complete graph `K_n`.
    pub fn complete(n: u32) -> Self {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// Cycle `C_n` (requires `n >= 3`).
    pub fn cycle(n: u32) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|u| (u, (u + 1) % n))).unwrap()
    }

    /// Path `P_n` on `n` vertices (`n - 1` edges).
    pub fn path(n: u32) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges as sorted pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u as usize].iter().filter(move |&&v| u < v).map(move |&v| (u, v))
        })
    }

    /// Vertices within distance 2 of `v`, excluding `v` itself, deduplicated
    /// and sorted. Equals the neighborhood of `v` in the square.
    pub fn two_ball(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.adj[v as usize].clone();
        for &u in &self.adj[v as usize] {
            out.extend(self.adj[u as usize].iter().copied().filter(|&w| w != v));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The square: same vertices, `uv` an edge iff `u != v` and the distance
    /// between `u` and `v` is at most 2.
    pub fn square(&self) -> SimpleGraph {
        let mut adj: Vec<Vec<Vertex>> = Vec::with_capacity(self.n as usize);
        let mut m = 0usize;
        for v in 0..self.n {
            let ball = self.two_ball(v);
            m += ball.len();
            adj.push(ball);
        }
        SimpleGraph { n: self.n, m: m / 2, adj }
    }
}

/// A total assignment of colors `1..=color_count` to the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    color_count: Color,
    colors: Vec<Color>,
}

impl Coloring {
    /// Wraps an assignment, checking every color lies in `1..=color_count`.
    pub fn new(color_count: Color, colors: Vec<Color>) -> Result<Self, GraphError> {
        assert!(color_count >= 1, "color count must be positive");
        for (v, &c) in colors.iter().enumerate() {
            if c < 1 || c > color_count {
                return Err(GraphError::VertexOutOfRange(v as Vertex, color_count));
            }
        }
        Ok(Coloring { color_count, colors })
    }

    pub fn color_count(&self) -> Color {
        self.color_count
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v as usize]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// True when no two adjacent vertices of `g` share a color.
    pub fn is_proper_on(&self, g: &SimpleGraph) -> bool {
        g.edges().all(|(u, v)| self.colors[u as usize] != self.colors[v as usize])
    }
}

/// Greedy coloring along the given vertex order: each vertex takes the
/// smallest color absent among its already-colored neighbors. Uses at most
/// `max_degree + 1` colors.
pub fn greedy_coloring(g: &SimpleGraph, order: &[Vertex]) -> Result<Coloring, GraphError> {
    let n = g.n() as usize;
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(GraphError::InvalidPermutation);
    }
    for &v in order {
        if v as usize >= n || seen[v as usize] {
            return Err(GraphError::InvalidPermutation);
        }
        seen[v as usize] = true;
    }

    let mut colors = vec![0; n];
    let mut max_used = 1;
    let mut taken = vec![0u32; n + 2];
    let mut stamp = 0u32;
    for &v in order {
        stamp += 1;
        for &u in g.neighbors(v) {
            let c = colors[u as usize];
            if c != 0 {
                taken[c as usize] = stamp;
            }
        }
        let mut c = 1;
        while taken[c as usize] == stamp {
            c += 1;
        }
        colors[v as usize] = c as Color;
        max_used = max_used.max(c as Color);
    }
    Coloring::new(max_used, colors)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("greedy exclusion ran out of vertices after {found} of {target}")]
pub struct TargetUnreachable {
    pub target: usize,
    pub found: usize,
}

/// Greedily builds an independent set of exactly `target` vertices by
/// repeatedly taking the smallest vertex not yet excluded and excluding its
/// closed neighborhood. Succeeds whenever
/// `target <= ceil(n / (max_degree + 1))`.
pub fn greedy_independent_set(g: &SimpleGraph, target: usize) -> Result<Vec<Vertex>, TargetUnreachable> {
    let mut excluded = vec![false; g.n() as usize];
    let mut picked = Vec::with_capacity(target);
    for v in 0..g.n() {
        if picked.len() == target {
            break;
        }
        if excluded[v as usize] {
            continue;
        }
        picked.push(v);
        excluded[v as usize] = true;
        for &u in g.neighbors(v) {
            excluded[u as usize] = true;
        }
    }
    if picked.len() < target {
        return Err(TargetUnreachable { target, found: picked.len() });
    }
    Ok(picked)
}

/// A handle into an [`assemble`] input: vertex `vertex` of `parts[part]`.
pub type Handle = (usize, Vertex);

/// Maps every original `(part, vertex)` handle to its identifier in an
/// assembled graph.
#[derive(Clone, Debug)]
pub struct HandleMap {
    resolved: Vec<Vec<Vertex>>,
}

impl HandleMap {
    /// Final identifier of `vertex` in part `part`.
    pub fn resolve(&self, part: usize, vertex: Vertex) -> Vertex {
        self.resolved[part][vertex as usize]
    }

    pub fn part_len(&self, part: usize) -> u32 {
        self.resolved[part].len() as u32
    }
}

/// Disjoint union of `parts` with the listed handle pairs merged and the
/// extra edges added. Returns the graph together with the handle map; merged
/// classes keep the identifier of their first member in part-major order, and
/// surviving identifiers are renumbered densely in that order.
pub fn assemble(
    parts: &[SimpleGraph],
    identifications: &[(Handle, Handle)],
    extra_edges: &[(Handle, Handle)],
) -> Result<(SimpleGraph, HandleMap), GraphError> {
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0u32;
    for p in parts {
        offsets.push(total);
        total += p.n();
    }
    let flat = |h: Handle| -> Result<u32, GraphError> {
        let (part, vertex) = h;
        match parts.get(part) {
            Some(p) if vertex < p.n() => Ok(offsets[part] + vertex),
            _ => Err(GraphError::InvalidHandle { part, vertex }),
        }
    };

    // Union-find over the flattened vertex ids.
    let mut parent: Vec<u32> = (0..total).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while parent[r as usize] != r {
            r = parent[r as usize];
        }
        let mut c = x;
        while parent[c as usize] != r {
            let next = parent[c as usize];
            parent[c as usize] = r;
            c = next;
        }
        r
    }
    for &(a, b) in identifications {
        let (fa, fb) = (flat(a)?, flat(b)?);
        let (ra, rb) = (find(&mut parent, fa), find(&mut parent, fb));
        // Smaller root survives so class representatives are deterministic.
        let (lo, hi) = if ra <= rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }

    // Representatives in ascending order get the dense final ids.
    let mut final_id = vec![u32::MAX; total as usize];
    let mut next = 0u32;
    for x in 0..total {
        if find(&mut parent, x) == x {
            final_id[x as usize] = next;
            next += 1;
        }
    }
    for x in 0..total {
        let r = find(&mut parent, x);
        final_id[x as usize] = final_id[r as usize];
    }

    let mut edges = std::collections::BTreeSet::new();
    let mut push_edge = |a: u32, b: u32| -> Result<(), GraphError> {
        let (u, v) = (final_id[a as usize], final_id[b as usize]);
        if u == v {
            return Err(GraphError::SelfLoopProduced(u));
        }
        edges.insert((u.min(v), u.max(v)));
        Ok(())
    };
    for (pi, p) in parts.iter().enumerate() {
        for (u, v) in p.edges() {
            push_edge(offsets[pi] + u, offsets[pi] + v)?;
        }
    }
    for &(a, b) in extra_edges {
        push_edge(flat(a)?, flat(b)?)?;
    }

    let graph = SimpleGraph::new(next, edges)?;
    let resolved = parts
        .iter()
        .enumerate()
        .map(|(pi, p)| (0..p.n()).map(|v| final_id[(offsets[pi] + v) as usize]).collect())
        .collect();
    Ok((graph, HandleMap { resolved }))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pairwise-BFS distance oracle, independent of `two_ball`.
    fn bfs_dist(g: &SimpleGraph, s: Vertex, t: Vertex) -> Option<usize> {
        let mut dist = vec![usize::MAX; g.n() as usize];
        let mut queue = std::collections::VecDeque::from([s]);
        dist[s as usize] = 0;
        while let Some(v) = queue.pop_front() {
            if v == t {
                return Some(dist[v as usize]);
            }
            for &u in g.neighbors(v) {
                if dist[u as usize] == usize::MAX {
                    dist[u as usize] = dist[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
        None
    }

    #[test]
    fn square_of_p3_is_triangle() {
        let sq = SimpleGraph::path(3).square();
        assert_eq!(sq, SimpleGraph::complete(3));
    }

    #[test]
    fn square_of_complete_is_complete() {
        for n in 1..=8 {
            assert_eq!(SimpleGraph::complete(n).square(), SimpleGraph::complete(n));
        }
    }

    #[test]
    fn square_of_c6_matches_bfs_oracle() {
        let g = SimpleGraph::cycle(6);
        let sq = g.square();
        assert_eq!(sq.m(), 12);
        for u in 0..6 {
            for v in 0..6 {
                if u == v {
                    continue;
                }
                let expect = bfs_dist(&g, u, v).unwrap() <= 2;
                assert_eq!(sq.has_edge(u, v), expect, "pair ({u}, {v})");
            }
        }
    }

    #[test]
    fn greedy_coloring_c5_within_delta_plus_one() {
        let g = SimpleGraph::cycle(5);
        let order: Vec<Vertex> = (0..5).collect();
        let c = greedy_coloring(&g, &order).unwrap();
        assert!(c.is_proper_on(&g));
        assert!(c.color_count() <= 3);
    }

    #[test]
    fn greedy_coloring_edgeless_single_color() {
        let g = SimpleGraph::edgeless(4);
        let c = greedy_coloring(&g, &[0, 1, 2, 3]).unwrap();
        assert!(c.colors().iter().all(|&x| x == 1));
    }

    #[test]
    fn greedy_coloring_k4_uses_four_colors() {
        let g = SimpleGraph::complete(4);
        let c = greedy_coloring(&g, &[2, 0, 3, 1]).unwrap();
        assert!(c.is_proper_on(&g));
        assert_eq!(c.color_count(), 4);
    }

    #[test]
    fn greedy_coloring_rejects_non_permutations() {
        let g = SimpleGraph::path(3);
        assert_eq!(greedy_coloring(&g, &[0, 1]), Err(GraphError::InvalidPermutation));
        assert_eq!(greedy_coloring(&g, &[0, 0, 1]), Err(GraphError::InvalidPermutation));
    }

    #[test]
    fn independent_set_in_c6_square() {
        // Brute-force check that {0, 3} is the lexicographically first
        // independent pair of the square (cyclic distance 3).
        let sq = SimpleGraph::cycle(6).square();
        let mut first = None;
        'outer: for u in 0..6 {
            for v in u + 1..6 {
                if !sq.has_edge(u, v) {
                    first = Some(vec![u, v]);
                    break 'outer;
                }
            }
        }
        assert_eq!(greedy_independent_set(&sq, 2).unwrap(), first.unwrap());
        assert_eq!(greedy_independent_set(&sq, 2).unwrap(), vec![0, 3]);
    }

    #[test]
    fn independent_set_in_clique() {
        let g = SimpleGraph::complete(3);
        assert_eq!(greedy_independent_set(&g, 1).unwrap(), vec![0]);
        assert_eq!(
            greedy_independent_set(&g, 2),
            Err(TargetUnreachable { target: 2, found: 1 })
        );
    }

    #[test]
    fn independent_set_guarantee_on_squares() {
        // target = ceil(n / (max_degree(g)^2 + 1)) never fails on g^2.
        for n in [5u32, 9, 17, 30] {
            let g = SimpleGraph::cycle(n);
            let sq = g.square();
            let d = g.max_degree();
            let target = (n as usize).div_ceil(d * d + 1);
            let set = greedy_independent_set(&sq, target).unwrap();
            assert_eq!(set.len(), target);
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    assert!(!sq.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn assemble_two_edges_into_path() {
        let k2 = SimpleGraph::complete(2);
        let (g, map) = assemble(&[k2.clone(), k2], &[((0, 1), (1, 0))], &[]).unwrap();
        assert_eq!(g, SimpleGraph::path(3));
        assert_eq!(map.resolve(0, 1), map.resolve(1, 0));
    }

    #[test]
    fn assemble_apex_over_cycle() {
        // 5-cycle plus an apex joined to every cycle vertex: 6 vertices, 10 edges.
        let parts = [SimpleGraph::cycle(5), SimpleGraph::complete(1)];
        let extra: Vec<_> = (0..5).map(|i| ((1usize, 0), (0usize, i))).collect();
        let (g, map) = assemble(&parts, &[], &extra).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.m(), 10);
        assert_eq!(g.degree(map.resolve(1, 0)), 5);
    }

    #[test]
    fn assemble_nothing_is_empty() {
        let (g, _) = assemble(&[], &[], &[]).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn assemble_rejects_bad_handles_and_loops() {
        let k2 = SimpleGraph::complete(2);
        let err = assemble(&[k2.clone()], &[((0, 0), (1, 0))], &[]).unwrap_err();
        assert_eq!(err, GraphError::InvalidHandle { part: 1, vertex: 0 });
        let err = assemble(&[k2], &[((0, 0), (0, 1))], &[]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoopProduced(0));
    }

    #[test]
    fn assemble_handle_map_is_bijective_modulo_identifications() {
        let parts = [SimpleGraph::path(3), SimpleGraph::cycle(4)];
        let ids = [((0usize, 2), (1usize, 0))];
        let (g, map) = assemble(&parts, &ids, &[]).unwrap();
        let mut images: Vec<Vertex> = Vec::new();
        for (pi, p) in parts.iter().enumerate() {
            for v in 0..p.n() {
                images.push(map.resolve(pi, v));
            }
        }
        images.sort_unstable();
        images.dedup();
        assert_eq!(images, (0..g.n()).collect::<Vec<_>>());
        assert_eq!(g.n(), 3 + 4 - 1);
    }
}
