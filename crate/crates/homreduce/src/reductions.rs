//! The three reduction pipelines: 3-coloring to list homomorphism over a
//! grouped graph, list homomorphism to plain homomorphism via rigidity
//! gadgets, and homomorphism to a family of subgraph-isomorphism instances
//! via vertex replication. Witnesses can be carried across each reduction in
//! both directions and are re-verified at every step.

use std::collections::BTreeMap;

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::gadgets::{build_a, build_t};
use crate::graph::{assemble, Color, SimpleGraph, Vertex};
use crate::partition::{
    grouping, grouping_with_color_count, verify_grouping, BalanceParams, GroupedGraph,
    PartitionError,
};
use crate::solver::{check_witness, solve_si, Problem, SolveBudget, SolveOutcome, Violation, Witness};

/// Refuse to materialize targets above this many vertices.
pub const TARGET_VERTEX_CAP: u128 = 1 << 20;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(Vertex),
    #[error("target would have {vertices} vertices, above the cap {cap}")]
    TargetTooLarge { vertices: u128, cap: u128 },
    #[error("grouping properties violated at bucket {bucket} (label {label})")]
    GroupingPropertyViolated { bucket: u32, label: Color },
    #[error("list entry {entry} for vertex {vertex} is not a target vertex")]
    ListOutOfRange { vertex: Vertex, entry: Vertex },
    #[error("the target graph is empty")]
    EmptyTarget,
    #[error("invalid witness: {0}")]
    InvalidWitness(#[from] Violation),
    #[error("witness cannot be decoded: {0}")]
    UndecodableWitness(String),
}

/// A pattern graph, a target graph, and one admissible target set per
/// pattern vertex.
#[derive(Clone, Debug)]
pub struct ListHomInstance {
    pattern: SimpleGraph,
    target: SimpleGraph,
    lists: Vec<Vec<Vertex>>,
}

impl ListHomInstance {
    /// Lists may be empty (the instance is then unsatisfiable) but must stay
    /// inside the target vertex set.
    pub fn new(
        pattern: SimpleGraph,
        target: SimpleGraph,
        mut lists: Vec<Vec<Vertex>>,
    ) -> Result<Self, ReductionError> {
        assert_eq!(lists.len(), pattern.n() as usize, "one list per pattern vertex");
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&entry) = list.iter().find(|&&t| t >= target.n()) {
                return Err(ReductionError::ListOutOfRange { vertex: v as Vertex, entry });
            }
        }
        Ok(ListHomInstance { pattern, target, lists })
    }

    pub fn pattern(&self) -> &SimpleGraph {
        &self.pattern
    }

    pub fn target(&self) -> &SimpleGraph {
        &self.target
    }

    /// Sorted admissible target set of `v`.
    pub fn list(&self, v: Vertex) -> &[Vertex] {
        &self.lists[v as usize]
    }

    pub fn lists(&self) -> &[Vec<Vertex>] {
        &self.lists
    }
}

/// A target vertex of the list-homomorphism reduction: a redundant coloring
/// record `R` over `{0,1,2,3}` indexed by labels, paired with a label.
/// Two such vertices are adjacent iff `R1[l2] != R2[l1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EncodedTargetVertex {
    pub label: Color,
    pub code: Vec<u8>,
}

impl EncodedTargetVertex {
    pub fn adjacent(&self, other: &EncodedTargetVertex) -> bool {
        self.code[other.label as usize - 1] != other.code[self.label as usize - 1]
    }
}

impl std::fmt::Display for EncodedTargetVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:", self.label)?;
        for &d in &self.code {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// For bucket `B`, maps each label `i` to the unique member of `B` with a
/// neighbor in the unique label-`i` neighbor bucket, or `None` when `B` has
/// no label-`i` neighbor. Uniqueness is exactly what the grouping properties
/// promise, so any second edge toward one label is reported as a violation.
pub fn bucket_neighbor_map(gg: &GroupedGraph, b: u32) -> Result<Vec<Option<Vertex>>, ReductionError> {
    let l = gg.labels().color_count() as usize;
    let mut phi: Vec<Option<Vertex>> = vec![None; l];
    for &u in gg.bucket(b) {
        for &w in gg.base().neighbors(u) {
            let bw = gg.bucket_of(w);
            if bw == b {
                return Err(ReductionError::GroupingPropertyViolated { bucket: b, label: gg.label(b) });
            }
            let i = gg.label(bw) as usize;
            if phi[i - 1].is_some() {
                return Err(ReductionError::GroupingPropertyViolated { bucket: b, label: i as Color });
            }
            phi[i - 1] = Some(u);
        }
    }
    Ok(phi)
}

/// The redundant encoding of a 3-coloring `f` of bucket `b`: entry `i` is
/// `0` where the bucket has no label-`i` neighbor and the color of the
/// responsible member otherwise. `f` assigns colors `1..=3` positionally to
/// the sorted bucket members.
pub fn encode_coloring(gg: &GroupedGraph, b: u32, f: &[u8]) -> Result<Vec<u8>, ReductionError> {
    let phi = bucket_neighbor_map(gg, b)?;
    Ok(encode_with_phi(gg, b, &phi, f))
}

fn encode_with_phi(gg: &GroupedGraph, b: u32, phi: &[Option<Vertex>], f: &[u8]) -> Vec<u8> {
    let members = gg.bucket(b);
    debug_assert_eq!(members.len(), f.len());
    phi.iter()
        .map(|slot| match slot {
            None => 0u8,
            Some(u) => {
                let pos = members.binary_search(u).expect("phi maps into the bucket");
                f[pos]
            }
        })
        .collect()
}

/// Output of [`col_to_listhom`]: the instance plus everything needed to
/// carry witnesses across the reduction.
#[derive(Clone, Debug)]
pub struct ColToListHom {
    pub instance: ListHomInstance,
    pub grouped: GroupedGraph,
    /// Encoding of each target vertex.
    pub target_codes: Vec<EncodedTargetVertex>,
    pub trimmed: bool,
    code_index: BTreeMap<(Color, Vec<u8>), Vertex>,
    bucket_phi: Vec<Vec<Option<Vertex>>>,
}

impl ColToListHom {
    /// Target vertex carrying the given label and code, if present.
    pub fn target_id(&self, label: Color, code: &[u8]) -> Option<Vertex> {
        self.code_index.get(&(label, code.to_vec())).copied()
    }
}

/// Reduces 3-colorability of `g` to a list-homomorphism instance over the
/// grouping with `L = lambda * r` colors. See
/// [`col_to_listhom_with_color_count`] for an explicitly chosen `L`.
pub fn col_to_listhom(
    g: &SimpleGraph,
    r: u64,
    params: &BalanceParams,
    trim: bool,
) -> Result<ColToListHom, ReductionError> {
    check_no_isolated(g)?;
    let gg = grouping(g, r, params)?;
    build_listhom(gg, trim)
}

/// As [`col_to_listhom`] with an explicit color count.
pub fn col_to_listhom_with_color_count(
    g: &SimpleGraph,
    r: u64,
    l: u64,
    params: &BalanceParams,
    trim: bool,
) -> Result<ColToListHom, ReductionError> {
    check_no_isolated(g)?;
    let gg = grouping_with_color_count(g, r, l, params)?;
    build_listhom(gg, trim)
}

fn check_no_isolated(g: &SimpleGraph) -> Result<(), ReductionError> {
    match (0..g.n()).find(|&v| g.degree(v) == 0) {
        Some(v) => Err(ReductionError::IsolatedVertex(v)),
        None => Ok(()),
    }
}

fn build_listhom(gg: GroupedGraph, trim: bool) -> Result<ColToListHom, ReductionError> {
    // The reduction leans on grouping items 2-4; verify rather than assume.
    let report = verify_grouping(&gg, 1);
    if !report.items_2_to_4() {
        return Err(ReductionError::GroupingPropertyViolated { bucket: 0, label: 0 });
    }

    let l = gg.labels().color_count();
    let buckets = gg.bucket_count();
    let mut bucket_phi = Vec::with_capacity(buckets);
    for b in 0..buckets {
        bucket_phi.push(bucket_neighbor_map(&gg, b as u32)?);
    }

    // Pre-materialization size guards.
    let mut support_bound: u128 = 0;
    for b in 0..buckets {
        support_bound += 3u128.saturating_pow(gg.bucket(b as u32).len() as u32);
    }
    let vertex_bound = if trim {
        support_bound
    } else {
        (l as u128) * 4u128.saturating_pow(l)
    };
    if vertex_bound > TARGET_VERTEX_CAP {
        return Err(ReductionError::TargetTooLarge { vertices: vertex_bound, cap: TARGET_VERTEX_CAP });
    }

    // Lists as (label, code) pairs, one entry per 3-coloring of the bucket.
    let mut list_codes: Vec<Vec<(Color, Vec<u8>)>> = Vec::with_capacity(buckets);
    for b in 0..buckets {
        let label = gg.label(b as u32);
        let size = gg.bucket(b as u32).len();
        let mut seen = std::collections::BTreeSet::new();
        let mut f = vec![1u8; size];
        loop {
            seen.insert((label, encode_with_phi(&gg, b as u32, &bucket_phi[b], &f)));
            if !advance_ternary(&mut f) {
                break;
            }
        }
        list_codes.push(seen.into_iter().collect());
    }

    let mut code_index: BTreeMap<(Color, Vec<u8>), Vertex> = BTreeMap::new();
    let mut target_codes: Vec<EncodedTargetVertex> = Vec::new();
    if trim {
        let mut all: std::collections::BTreeSet<(Color, Vec<u8>)> = std::collections::BTreeSet::new();
        for codes in &list_codes {
            all.extend(codes.iter().cloned());
        }
        for (label, code) in all {
            code_index.insert((label, code.clone()), target_codes.len() as Vertex);
            target_codes.push(EncodedTargetVertex { label, code });
        }
    } else {
        for label in 1..=l {
            let mut code = vec![0u8; l as usize];
            loop {
                code_index.insert((label, code.clone()), target_codes.len() as Vertex);
                target_codes.push(EncodedTargetVertex { label, code: code.clone() });
                if !advance_quaternary(&mut code) {
                    break;
                }
            }
        }
    }

    let nt = target_codes.len() as u32;
    let mut edges = Vec::new();
    for i in 0..nt {
        for j in i + 1..nt {
            if target_codes[i as usize].adjacent(&target_codes[j as usize]) {
                edges.push((i, j));
            }
        }
    }
    let target = SimpleGraph::new(nt, edges).unwrap();

    let lists: Vec<Vec<Vertex>> = list_codes
        .into_iter()
        .map(|codes| codes.into_iter().map(|key| code_index[&key]).collect())
        .collect();
    let instance = ListHomInstance::new(gg.quotient().clone(), target, lists)?;

    Ok(ColToListHom { instance, grouped: gg, target_codes, trimmed: trim, code_index, bucket_phi })
}

/// Steps a vector over `{1,2,3}` to its successor; false after the last.
fn advance_ternary(f: &mut [u8]) -> bool {
    for d in (0..f.len()).rev() {
        if f[d] < 3 {
            f[d] += 1;
            f[d + 1..].fill(1);
            return true;
        }
    }
    false
}

/// Steps a vector over `{0,1,2,3}` to its successor; false after the last.
fn advance_quaternary(code: &mut [u8]) -> bool {
    for d in (0..code.len()).rev() {
        if code[d] < 3 {
            code[d] += 1;
            code[d + 1..].fill(0);
            return true;
        }
    }
    false
}

/// Turns a proper 3-coloring of the base graph (a witness into `K_3`) into
/// the list-homomorphism witness that sends each bucket to the encoding of
/// its restricted coloring.
pub fn lift_3coloring(red: &ColToListHom, kcol: &Witness) -> Result<Witness, ReductionError> {
    let base = red.grouped.base();
    check_witness(&Problem::KColoring { graph: base, colors: 3 }, kcol)?;
    let mut map = Vec::with_capacity(red.grouped.bucket_count());
    for b in 0..red.grouped.bucket_count() {
        let members = red.grouped.bucket(b as u32);
        let f: Vec<u8> = members.iter().map(|&v| kcol.image(v) as u8 + 1).collect();
        let code = encode_with_phi(&red.grouped, b as u32, &red.bucket_phi[b], &f);
        let label = red.grouped.label(b as u32);
        let id = red.target_id(label, &code).ok_or_else(|| {
            ReductionError::UndecodableWitness(format!("code of bucket {b} missing from target"))
        })?;
        map.push(id);
    }
    let w = Witness::new(map);
    check_witness(&Problem::ListHom(&red.instance), &w)?;
    Ok(w)
}

/// Reads a proper 3-coloring of the base graph back out of a valid
/// list-homomorphism witness.
pub fn project_3coloring(red: &ColToListHom, w: &Witness) -> Result<Witness, ReductionError> {
    check_witness(&Problem::ListHom(&red.instance), w)?;
    let base = red.grouped.base();
    let mut colors = vec![0u32; base.n() as usize];
    for b in 0..red.grouped.bucket_count() {
        let code = &red.target_codes[w.image(b as Vertex) as usize].code;
        for &v in red.grouped.bucket(b as u32) {
            let slot = red.bucket_phi[b]
                .iter()
                .position(|&u| u == Some(v))
                .ok_or_else(|| {
                    ReductionError::UndecodableWitness(format!("vertex {v} has no label slot"))
                })?;
            let c = code[slot];
            if !(1..=3).contains(&c) {
                return Err(ReductionError::UndecodableWitness(format!(
                    "slot {slot} of bucket {b} holds {c}, not a color"
                )));
            }
            colors[v as usize] = c as u32 - 1;
        }
    }
    let kcol = Witness::new(colors);
    check_witness(&Problem::KColoring { graph: base, colors: 3 }, &kcol)?;
    Ok(kcol)
}

// ---------------------------------------------------------------------------
// List homomorphism -> homomorphism
// ---------------------------------------------------------------------------

/// The pattern/target pair produced by [`listhom_to_hom`], with provenance
/// maps for witness lifting and projection.
#[derive(Clone, Debug)]
pub struct HomReduction {
    pub pattern: SimpleGraph,
    pub target: SimpleGraph,
    /// Pattern-side ids: chain, matching, original pattern vertices.
    g_chain: Vec<Vertex>,
    g_matching: Vec<Vertex>,
    g_orig: Vec<Vertex>,
    /// Target-side ids: chain, matching, original target vertices.
    h_chain: Vec<Vertex>,
    h_matching: Vec<Vertex>,
    h_orig: Vec<Vertex>,
}

impl HomReduction {
    /// Final id of original pattern vertex `v` in the produced pattern.
    pub fn pattern_id(&self, v: Vertex) -> Vertex {
        self.g_orig[v as usize]
    }

    /// Final id of original target vertex `j` in the produced target.
    pub fn target_id(&self, j: Vertex) -> Vertex {
        self.h_orig[j as usize]
    }
}

/// Builds an equisatisfiable homomorphism instance from a list-homomorphism
/// instance with `h >= 2` target vertices.
///
/// Both sides get a copy of the chain `T_h` and the matching `A_h`, with
/// `z_i` joined to `a_i` and `b_i`. Every pattern vertex is joined to every
/// `a_j`, and to `b_j` exactly when `j` is outside its list; every target
/// vertex is joined to every `a_j` and to every `b_j` except its own. The
/// produced sides have at most `n + 25 h^2` and `25 h^2` vertices.
///
/// For `h = 1` the construction still runs but does not preserve
/// unsatisfiability: with a single matching pair nothing anchors `a_1 b_1`,
/// which may fold into the chain together with the pattern. Anchoring needs a
/// second pair to demand short paths across the matching.
pub fn listhom_to_hom(inst: &ListHomInstance) -> Result<HomReduction, ReductionError> {
    let h = inst.target().n();
    if h == 0 {
        return Err(ReductionError::EmptyTarget);
    }
    let chain = build_t(h, h);
    let matching = build_a(h);
    let zs = &chain.anchors.zs;
    let (a, b) = (&matching.anchors.a, &matching.anchors.b);
    debug_assert_eq!(zs.len(), h as usize);

    let chain_part = 0usize;
    let match_part = 1usize;
    let orig_part = 2usize;

    let mut shared_edges: Vec<((usize, Vertex), (usize, Vertex))> = Vec::new();
    for i in 0..h as usize {
        shared_edges.push(((chain_part, zs[i]), (match_part, a[i])));
        shared_edges.push(((chain_part, zs[i]), (match_part, b[i])));
    }

    // Pattern side.
    let mut g_edges = shared_edges.clone();
    for v in 0..inst.pattern().n() {
        for j in 0..h {
            g_edges.push(((orig_part, v), (match_part, a[j as usize])));
            if !inst.list(v).contains(&j) {
                g_edges.push(((orig_part, v), (match_part, b[j as usize])));
            }
        }
    }
    let g_parts = [chain.graph.clone(), matching.graph.clone(), inst.pattern().clone()];
    let (pattern, g_map) = assemble(&g_parts, &[], &g_edges).expect("pattern assembly is simple");

    // Target side.
    let mut h_edges = shared_edges;
    for j in 0..h {
        for i in 0..h {
            h_edges.push(((orig_part, j), (match_part, a[i as usize])));
            if i != j {
                h_edges.push(((orig_part, j), (match_part, b[i as usize])));
            }
        }
    }
    let h_parts = [chain.graph.clone(), matching.graph.clone(), inst.target().clone()];
    let (target, h_map) = assemble(&h_parts, &[], &h_edges).expect("target assembly is simple");

    let resolve = |map: &crate::graph::HandleMap, part: usize, len: u32| -> Vec<Vertex> {
        (0..len).map(|v| map.resolve(part, v)).collect()
    };
    Ok(HomReduction {
        g_chain: resolve(&g_map, chain_part, chain.graph.n()),
        g_matching: resolve(&g_map, match_part, matching.graph.n()),
        g_orig: resolve(&g_map, orig_part, inst.pattern().n()),
        h_chain: resolve(&h_map, chain_part, chain.graph.n()),
        h_matching: resolve(&h_map, match_part, matching.graph.n()),
        h_orig: resolve(&h_map, orig_part, inst.target().n()),
        pattern,
        target,
    })
}

/// Extends a valid list-homomorphism witness to the produced instance:
/// identity on the chain and matching parts, the witness on the rest.
pub fn lift_witness(
    inst: &ListHomInstance,
    w: &Witness,
    red: &HomReduction,
) -> Result<Witness, ReductionError> {
    check_witness(&Problem::ListHom(inst), w)?;
    let mut map = vec![0 as Vertex; red.pattern.n() as usize];
    for (local, &id) in red.g_chain.iter().enumerate() {
        map[id as usize] = red.h_chain[local];
    }
    for (local, &id) in red.g_matching.iter().enumerate() {
        map[id as usize] = red.h_matching[local];
    }
    for v in 0..inst.pattern().n() {
        map[red.g_orig[v as usize] as usize] = red.h_orig[w.image(v) as usize];
    }
    let lifted = Witness::new(map);
    check_witness(&Problem::Hom { pattern: &red.pattern, target: &red.target }, &lifted)?;
    Ok(lifted)
}

/// Restricts a valid homomorphism witness on the produced instance to the
/// original pattern, re-indexed into the original target.
pub fn project_witness(
    red: &HomReduction,
    inst: &ListHomInstance,
    lifted: &Witness,
) -> Result<Witness, ReductionError> {
    check_witness(&Problem::Hom { pattern: &red.pattern, target: &red.target }, lifted)?;
    let mut inv = vec![None; red.target.n() as usize];
    for (j, &id) in red.h_orig.iter().enumerate() {
        inv[id as usize] = Some(j as Vertex);
    }
    let mut map = Vec::with_capacity(inst.pattern().n() as usize);
    for v in 0..inst.pattern().n() {
        let img = lifted.image(red.g_orig[v as usize]);
        let j = inv[img as usize].ok_or_else(|| {
            ReductionError::UndecodableWitness(format!(
                "pattern vertex {v} maps outside the original target"
            ))
        })?;
        map.push(j);
    }
    let w = Witness::new(map);
    check_witness(&Problem::ListHom(inst), &w)?;
    Ok(w)
}

// ---------------------------------------------------------------------------
// Homomorphism -> subgraph isomorphism family
// ---------------------------------------------------------------------------

/// The family of subgraph-isomorphism instances equivalent to one
/// homomorphism question: one instance per composition of `|V(pattern)|`
/// into `|V(target)|` non-negative replication counts.
#[derive(Clone, Debug)]
pub struct SiInstanceFamily {
    pattern: SimpleGraph,
    target: SimpleGraph,
}

/// One family member: the host is the target with each vertex replicated
/// according to `replication`; `prototype` maps host vertices back.
#[derive(Clone, Debug)]
pub struct SiInstance {
    pub replication: Vec<u32>,
    pub host: SimpleGraph,
    pub prototype: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyDecision {
    Embeds { replication: Vec<u32>, witness: Witness },
    NoEmbedding,
    Timeout,
}

pub fn hom_to_si_instances(g: &SimpleGraph, h: &SimpleGraph) -> SiInstanceFamily {
    SiInstanceFamily { pattern: g.clone(), target: h.clone() }
}

impl SiInstanceFamily {
    pub fn pattern(&self) -> &SimpleGraph {
        &self.pattern
    }

    pub fn target(&self) -> &SimpleGraph {
        &self.target
    }

    /// Exact family cardinality `C(n + h - 1, h - 1)`.
    pub fn family_size(&self) -> u128 {
        let n = self.pattern.n() as u64;
        let h = self.target.n() as u64;
        if h == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        binomial(n + h - 1, h - 1)
    }

    /// Lazily yields the family members, replication sequences stepping from
    /// `(n, 0, .., 0)` down to `(0, .., 0, n)`.
    pub fn iter(&self) -> impl Iterator<Item = SiInstance> + '_ {
        Compositions::new(self.pattern.n(), self.target.n() as usize)
            .map(move |replication| self.instantiate(replication))
    }

    fn instantiate(&self, replication: Vec<u32>) -> SiInstance {
        let mut offsets = Vec::with_capacity(replication.len());
        let mut total = 0u32;
        let mut prototype = Vec::new();
        for (v, &count) in replication.iter().enumerate() {
            offsets.push(total);
            total += count;
            prototype.extend(std::iter::repeat_n(v as Vertex, count as usize));
        }
        let mut edges = Vec::new();
        for (u, v) in self.target.edges() {
            for cu in 0..replication[u as usize] {
                for cv in 0..replication[v as usize] {
                    edges.push((offsets[u as usize] + cu, offsets[v as usize] + cv));
                }
            }
        }
        let host = SimpleGraph::new(total, edges).expect("replicated host is simple");
        SiInstance { replication, host, prototype }
    }

    /// OR over the family: does some member embed the pattern? Yes answers
    /// short-circuit; an undecided member without any Yes gives `Timeout`.
    pub fn decide(&self, per_instance: SolveBudget) -> FamilyDecision {
        #[cfg(feature = "parallel")]
        {
            use std::sync::atomic::{AtomicBool, Ordering};
            let timed_out = AtomicBool::new(false);
            let hit = self
                .iter()
                .par_bridge()
                .find_map_any(|inst| match solve_si(&self.pattern, &inst.host, per_instance) {
                    SolveOutcome::Yes(witness) => Some((inst.replication, witness)),
                    SolveOutcome::No => None,
                    SolveOutcome::Timeout(_) => {
                        timed_out.store(true, Ordering::Relaxed);
                        None
                    }
                });
            match hit {
                Some((replication, witness)) => FamilyDecision::Embeds { replication, witness },
                None if timed_out.load(Ordering::Relaxed) => FamilyDecision::Timeout,
                None => FamilyDecision::NoEmbedding,
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let mut timed_out = false;
            for inst in self.iter() {
                match solve_si(&self.pattern, &inst.host, per_instance) {
                    SolveOutcome::Yes(witness) => {
                        return FamilyDecision::Embeds { replication: inst.replication, witness }
                    }
                    SolveOutcome::No => {}
                    SolveOutcome::Timeout(_) => timed_out = true,
                }
            }
            if timed_out {
                FamilyDecision::Timeout
            } else {
                FamilyDecision::NoEmbedding
            }
        }
    }
}

fn binomial(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc
}

struct Compositions {
    parts: usize,
    state: Option<Vec<u32>>,
}

impl Compositions {
    fn new(total: u32, parts: usize) -> Self {
        let state = if parts == 0 {
            (total == 0).then(Vec::new)
        } else {
            let mut first = vec![0u32; parts];
            first[0] = total;
            Some(first)
        };
        Compositions { parts, state }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.state.take()?;
        if self.parts > 1 {
            if let Some(i) = (0..self.parts - 1).find(|&i| cur[i] > 0) {
                let mut next = cur.clone();
                let carry = next[i] - 1;
                next[i] = 0;
                next[i + 1] += 1;
                next[0] = carry;
                self.state = Some(next);
            }
        }
        Some(cur)
    }
}
