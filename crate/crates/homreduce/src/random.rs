//! Seeded random graph generation.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{SimpleGraph, Vertex};

/// Specification of a random graph: identical specs give identical graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: u32,
    pub max_deg: u32,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no graph with max degree {max_deg}, no isolated vertices and {n} vertices found in {attempts} attempts")]
pub struct GenerationFailed {
    pub n: u32,
    pub max_deg: u32,
    pub attempts: u32,
}

const ATTEMPTS: u32 = 64;

/// Samples a simple graph with maximum degree at most `max_deg` and no
/// isolated vertices, reproducibly from the seed.
///
/// Each attempt lays down a random near-perfect matching so no vertex stays
/// isolated, then adds uniformly drawn extra edges while both endpoints are
/// under the degree cap, up to a target edge count drawn from
/// `[ceil(n/2), floor(n * max_deg / 2)]`.
pub fn random_graph(spec: &RandomSpec) -> Result<SimpleGraph, GenerationFailed> {
    assert!(spec.max_deg >= 1, "degree cap must be positive");
    let n = spec.n;
    if n == 0 {
        return Ok(SimpleGraph::edgeless(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..ATTEMPTS {
        if let Some(g) = attempt(&mut rng, n, spec.max_deg) {
            return Ok(g);
        }
    }
    Err(GenerationFailed { n, max_deg: spec.max_deg, attempts: ATTEMPTS })
}

fn attempt(rng: &mut ChaCha8Rng, n: u32, max_deg: u32) -> Option<SimpleGraph> {
    if n == 1 {
        // A single vertex is always isolated.
        return None;
    }
    let mut degree = vec![0u32; n as usize];
    let mut edges: std::collections::HashSet<(Vertex, Vertex)> = std::collections::HashSet::new();
    let push = |edges: &mut std::collections::HashSet<(Vertex, Vertex)>,
                    degree: &mut [u32],
                    u: Vertex,
                    v: Vertex|
     -> bool {
        let key = (u.min(v), u.max(v));
        if u == v || degree[u as usize] >= max_deg || degree[v as usize] >= max_deg {
            return false;
        }
        if edges.insert(key) {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
            true
        } else {
            false
        }
    };

    // Matching backbone: a shuffled pairing leaves no vertex isolated.
    let mut perm: Vec<Vertex> = (0..n).collect();
    for i in (1..perm.len()).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    for pair in perm.chunks_exact(2) {
        push(&mut edges, &mut degree, pair[0], pair[1]);
    }
    if n % 2 == 1 {
        let last = perm[n as usize - 1];
        let partner = perm[rng.random_range(0..n as usize - 1)];
        if !push(&mut edges, &mut degree, last, partner) && max_deg == 1 {
            // Odd n with a unit cap cannot avoid an isolated vertex.
            return None;
        }
    }

    let lo = (n as u64).div_ceil(2);
    let hi = n as u64 * max_deg as u64 / 2;
    let target = if hi > lo { rng.random_range(lo..=hi) } else { lo };
    let mut misses = 0u64;
    let miss_budget = 50 * n as u64 + 200;
    while (edges.len() as u64) < target && misses < miss_budget {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if !push(&mut edges, &mut degree, u, v) {
            misses += 1;
        }
    }

    if degree.iter().any(|&d| d == 0 || d > max_deg) {
        return None;
    }
    let mut sorted: Vec<(Vertex, Vertex)> = edges.into_iter().collect();
    sorted.sort_unstable();
    Some(SimpleGraph::new(n, sorted).expect("generator keeps the graph simple"))
}
