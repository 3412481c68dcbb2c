//! Brute-force reference deciders, written independently of the search
//! engine. They enumerate every assignment and check the defining
//! constraints directly; exponential, intended as differential-test oracles
//! at desk scale only.

use crate::graph::{SimpleGraph, Vertex};
use crate::reductions::ListHomInstance;
use crate::solver::Witness;

/// Iterates every map with the given per-vertex candidate sets, returning
/// the first one `accept` likes. The search space must stay small.
fn first_map(
    domains: &[Vec<Vertex>],
    accept: impl Fn(&[Vertex]) -> bool,
) -> Option<Vec<Vertex>> {
    let space: u128 = domains.iter().map(|d| d.len() as u128).product();
    assert!(space <= 200_000_000, "oracle search space too large: {space}");
    if domains.iter().any(|d| d.is_empty()) {
        return None;
    }
    let mut idx = vec![0usize; domains.len()];
    loop {
        let map: Vec<Vertex> = idx.iter().zip(domains).map(|(&i, d)| d[i]).collect();
        if accept(&map) {
            return Some(map);
        }
        let mut d = domains.len();
        loop {
            if d == 0 {
                return None;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < domains[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

fn full_domains(g: &SimpleGraph, h: &SimpleGraph) -> Vec<Vec<Vertex>> {
    vec![(0..h.n()).collect(); g.n() as usize]
}

fn edges_preserved(g: &SimpleGraph, h: &SimpleGraph, map: &[Vertex]) -> bool {
    g.edges().all(|(u, v)| h.has_edge(map[u as usize], map[v as usize]))
}

pub fn hom(g: &SimpleGraph, h: &SimpleGraph) -> Option<Witness> {
    first_map(&full_domains(g, h), |map| edges_preserved(g, h, map)).map(Witness::new)
}

pub fn count_hom(g: &SimpleGraph, h: &SimpleGraph) -> u64 {
    let domains = full_domains(g, h);
    let space: u128 = domains.iter().map(|d| d.len() as u128).product();
    assert!(space <= 200_000_000, "oracle search space too large: {space}");
    if domains.iter().any(|d| d.is_empty()) {
        return 0;
    }
    let mut idx = vec![0usize; domains.len()];
    let mut count = 0u64;
    loop {
        let map: Vec<Vertex> = idx.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
        if edges_preserved(g, h, &map) {
            count += 1;
        }
        let mut d = domains.len();
        loop {
            if d == 0 {
                return count;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < domains[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

pub fn listhom(inst: &ListHomInstance) -> Option<Witness> {
    let domains: Vec<Vec<Vertex>> =
        (0..inst.pattern().n()).map(|v| inst.list(v).to_vec()).collect();
    first_map(&domains, |map| edges_preserved(inst.pattern(), inst.target(), map)).map(Witness::new)
}

pub fn li_hom(g: &SimpleGraph, h: &SimpleGraph) -> Option<Witness> {
    let square = g.square();
    first_map(&full_domains(g, h), |map| {
        edges_preserved(g, h, map)
            && square.edges().all(|(u, v)| {
                g.has_edge(u, v) || map[u as usize] != map[v as usize]
            })
    })
    .map(Witness::new)
}

pub fn si(g: &SimpleGraph, h: &SimpleGraph) -> Option<Witness> {
    first_map(&full_domains(g, h), |map| {
        let mut seen = vec![false; h.n() as usize];
        for &x in map {
            if seen[x as usize] {
                return false;
            }
            seen[x as usize] = true;
        }
        edges_preserved(g, h, map)
    })
    .map(Witness::new)
}

pub fn kcol(g: &SimpleGraph, k: u32) -> Option<Witness> {
    hom(g, &SimpleGraph::complete(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_facts() {
        let c5 = SimpleGraph::cycle(5);
        assert!(hom(&c5, &SimpleGraph::complete(2)).is_none());
        assert_eq!(count_hom(&c5, &c5), 10);
        assert!(si(&SimpleGraph::complete(3), &SimpleGraph::cycle(4)).is_none());
        assert!(kcol(&SimpleGraph::complete(4), 3).is_none());
        assert!(kcol(&c5, 3).is_some());
        assert!(li_hom(&SimpleGraph::path(3), &SimpleGraph::complete(2)).is_none());
    }
}
