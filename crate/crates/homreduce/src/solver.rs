//! Exact decision and search oracles for homomorphism-style problems.
//!
//! One backtracking engine serves HOM, LIST-HOM, locally injective HOM,
//! subgraph isomorphism and k-coloring: variables are pattern vertices,
//! domains are target vertices, and the only constraint shapes are "images
//! adjacent" and "images distinct". Arc-consistency runs at every search
//! node; variables are picked smallest-domain-first with ties by identifier,
//! values ascending, so runs are deterministic.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{SimpleGraph, Vertex};
use crate::reductions::ListHomInstance;

/// A total map from pattern vertices to target vertices. Validity is always
/// relative to a problem kind and established by [`check_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    map: Vec<Vertex>,
}

impl Witness {
    pub fn new(map: Vec<Vertex>) -> Self {
        Witness { map }
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.map[v as usize]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Node and wall-clock limits. Exhaustion yields `Timeout`, never a wrong
/// answer.
#[derive(Clone, Copy, Debug)]
pub struct SolveBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl SolveBudget {
    pub fn new(max_nodes: u64, max_time: Duration) -> Self {
        assert!(max_nodes > 0 && max_time > Duration::ZERO);
        SolveBudget { max_nodes, max_time }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self::new(max_nodes, Duration::from_secs(u32::MAX as u64))
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX, Duration::from_secs(u32::MAX as u64))
    }
}

impl Default for SolveBudget {
    fn default() -> Self {
        Self::unlimited()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Yes(Witness),
    No,
    Timeout(u64),
}

impl SolveOutcome {
    /// `Some(true)` / `Some(false)` for decided runs, `None` on timeout.
    pub fn decision(&self) -> Option<bool> {
        match self {
            SolveOutcome::Yes(_) => Some(true),
            SolveOutcome::No => Some(false),
            SolveOutcome::Timeout(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SolveOutcome::Yes(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountOutcome {
    Exact(u64),
    Timeout { nodes: u64, partial: u64 },
}

/// First violated constraint of a witness check.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("witness covers {found} vertices, pattern has {expected}")]
    NotTotal { expected: usize, found: usize },
    #[error("image {image} of vertex {vertex} is not a target vertex")]
    ImageOutOfRange { vertex: Vertex, image: Vertex },
    #[error("edge ({u}, {v}) is not mapped to an edge")]
    EdgeNotPreserved { u: Vertex, v: Vertex },
    #[error("image of vertex {vertex} is not in its list")]
    ListViolated { vertex: Vertex },
    #[error("vertices {u} and {v} share an image under an injective kind")]
    NotInjective { u: Vertex, v: Vertex },
    #[error("vertices {u} and {v} share a neighbor but also an image")]
    SharedNeighborCollision { u: Vertex, v: Vertex },
}

/// Problem kinds the verifier understands.
pub enum Problem<'a> {
    Hom { pattern: &'a SimpleGraph, target: &'a SimpleGraph },
    ListHom(&'a ListHomInstance),
    LocallyInjectiveHom { pattern: &'a SimpleGraph, target: &'a SimpleGraph },
    SubgraphIso { pattern: &'a SimpleGraph, target: &'a SimpleGraph },
    KColoring { graph: &'a SimpleGraph, colors: u32 },
}

/// Polynomial check of exactly the defining constraints of the kind.
pub fn check_witness(problem: &Problem<'_>, w: &Witness) -> Result<(), Violation> {
    let (pattern, target_n, target_edge): (&SimpleGraph, u32, Box<dyn Fn(Vertex, Vertex) -> bool>) =
        match problem {
            Problem::Hom { pattern, target }
            | Problem::LocallyInjectiveHom { pattern, target }
            | Problem::SubgraphIso { pattern, target } => {
                (pattern, target.n(), Box::new(|x, y| target.has_edge(x, y)))
            }
            Problem::ListHom(inst) => {
                let target = inst.target();
                (inst.pattern(), target.n(), Box::new(move |x, y| target.has_edge(x, y)))
            }
            Problem::KColoring { graph, colors } => {
                (graph, *colors, Box::new(|x, y| x != y))
            }
        };

    if w.len() != pattern.n() as usize {
        return Err(Violation::NotTotal { expected: pattern.n() as usize, found: w.len() });
    }
    for v in 0..pattern.n() {
        if w.image(v) >= target_n {
            return Err(Violation::ImageOutOfRange { vertex: v, image: w.image(v) });
        }
    }
    for (u, v) in pattern.edges() {
        if !target_edge(w.image(u), w.image(v)) {
            return Err(Violation::EdgeNotPreserved { u, v });
        }
    }

    match problem {
        Problem::ListHom(inst) => {
            for v in 0..pattern.n() {
                if !inst.list(v).contains(&w.image(v)) {
                    return Err(Violation::ListViolated { vertex: v });
                }
            }
        }
        Problem::LocallyInjectiveHom { pattern, .. } => {
            let square = pattern.square();
            for (u, v) in square.edges() {
                if !pattern.has_edge(u, v) && w.image(u) == w.image(v) {
                    return Err(Violation::SharedNeighborCollision { u, v });
                }
            }
        }
        Problem::SubgraphIso { pattern, .. } => {
            for u in 0..pattern.n() {
                for v in u + 1..pattern.n() {
                    if w.image(u) == w.image(v) {
                        return Err(Violation::NotInjective { u, v });
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum Con {
    /// Images must be adjacent in the target; the index selects the
    /// clique-threshold refinement of the adjacency relation.
    Edge(u8),
    /// Images must differ.
    Diff,
    /// Image must be strictly below the other variable's image.
    Below,
    /// Image must be strictly above the other variable's image.
    Above,
}

struct Engine {
    nv: usize,
    nt: usize,
    words: usize,
    /// Target adjacency rows, `nt * words` words. Further entries are the
    /// thresholded variants: row sets restricted to edges lying in cliques
    /// of at least the registered size.
    adj: Vec<Vec<u64>>,
    /// Clique threshold of each `adj` layer; layer 0 is plain adjacency.
    thresholds: Vec<u32>,
    /// Per-variable constraint lists `(other, kind)`.
    cons: Vec<Vec<(u32, Con)>>,
    root: Vec<u64>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    count_mode: bool,
    solutions: u64,
    found: Option<Vec<Vertex>>,
    /// Per-variable explanation: the decision levels its current domain
    /// state depends on, closed under propagation chains.
    conf: Vec<Conflict>,
    /// Saved explanations per level, for unwinding.
    trail: Vec<Vec<(u32, Conflict)>>,
    snap_epoch: Vec<u64>,
    epoch: u64,
    /// Twin class of each target value; classes with more than one member
    /// are swappable by a target automorphism.
    value_class: Vec<u32>,
    class_has_twins: Vec<bool>,
    /// How many current decisions use each target value.
    decided_value_count: Vec<u32>,
    class_stamp: Vec<u64>,
    node_counter: u64,
    dominance: bool,
    /// Last found support per (arc, value); skips most re-scans. Empty when
    /// the table would be too large.
    residue: Vec<u32>,
    arc_offset: Vec<u32>,
    /// Wipeout counts per variable, for the dom/wdeg variable order.
    fail_weight: Vec<u64>,
    /// Current domains, mutated in place with an undo trail.
    dom: Vec<u64>,
    trail_vars: Vec<u32>,
    trail_rows: Vec<u64>,
    dom_epoch: Vec<u64>,
    scratch: Vec<u64>,
}

enum Stop {
    Budget,
}

/// Twin-value dominance below the root would trade backjumping power for
/// sibling pruning; measurements on the gadget instances favor the jumps.
const DEEP_DOMINANCE: bool = false;

/// Set of decision levels blamed for a dead end.
#[derive(Clone)]
struct Conflict(Vec<u64>);

impl Conflict {
    fn new(levels: usize) -> Self {
        Conflict(vec![0u64; levels.div_ceil(64).max(1)])
    }

    fn insert(&mut self, level: u32) {
        self.0[level as usize >> 6] |= 1 << (level & 63);
    }

    fn remove(&mut self, level: u32) {
        self.0[level as usize >> 6] &= !(1 << (level & 63));
    }

    fn contains(&self, level: u32) -> bool {
        self.0[level as usize >> 6] & (1 << (level & 63)) != 0
    }

    fn union(&mut self, other: &Conflict) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

enum Explored {
    Found,
    /// Subtree exhausted; the conflict set says which decision levels its
    /// failures depended on.
    Exhausted(Conflict),
}

impl Engine {
    fn new(target: &SimpleGraph, nv: usize, budget: &SolveBudget) -> Self {
        let nt = target.n() as usize;
        let words = nt.div_ceil(64).max(1);
        let mut base = vec![0u64; nt * words];
        for (u, v) in target.edges() {
            base[u as usize * words + (v as usize >> 6)] |= 1 << (v & 63);
            base[v as usize * words + (u as usize >> 6)] |= 1 << (u & 63);
        }
        let adj = vec![base];
        let deadline = Instant::now().checked_add(budget.max_time);

        // Twin classes of target values: identical closed neighborhoods.
        let mut groups: std::collections::HashMap<Vec<Vertex>, u32> = std::collections::HashMap::new();
        let mut value_class = vec![0u32; nt];
        let mut class_sizes: Vec<u32> = Vec::new();
        for x in 0..nt as u32 {
            let mut key = target.neighbors(x).to_vec();
            key.push(x);
            key.sort_unstable();
            let next = class_sizes.len() as u32;
            let cls = *groups.entry(key).or_insert(next);
            if cls == next {
                class_sizes.push(0);
            }
            class_sizes[cls as usize] += 1;
            value_class[x as usize] = cls;
        }
        let class_has_twins = class_sizes.iter().map(|&s| s > 1).collect();

        Engine {
            nv,
            nt,
            words,
            adj,
            thresholds: vec![2],
            cons: vec![Vec::new(); nv],
            root: vec![0u64; nv * words],
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline,
            count_mode: false,
            solutions: 0,
            found: None,
            conf: vec![Conflict::new(nv + 2); nv],
            trail: vec![Vec::new(); nv + 2],
            snap_epoch: vec![u64::MAX; nv],
            epoch: 0,
            value_class,
            class_has_twins,
            decided_value_count: vec![0u32; nt],
            class_stamp: vec![0u64; class_sizes.len()],
            node_counter: 0,
            dominance: false,
            residue: Vec::new(),
            arc_offset: Vec::new(),
            fail_weight: vec![0; nv],
            dom: Vec::new(),
            trail_vars: Vec::new(),
            trail_rows: Vec::new(),
            dom_epoch: vec![u64::MAX; nv],
            scratch: Vec::new(),
        }
    }

    /// Saves a domain row once per branch so it can be restored on unwind.
    fn save_dom(&mut self, v: usize, _level: u32) {
        if self.dom_epoch[v] != self.epoch {
            self.dom_epoch[v] = self.epoch;
            self.trail_vars.push(v as u32);
            self.trail_rows.extend_from_slice(&self.dom[v * self.words..(v + 1) * self.words]);
        }
    }

    fn unwind_domains(&mut self, mark: (usize, usize)) {
        while self.trail_vars.len() > mark.0 {
            let v = self.trail_vars.pop().unwrap() as usize;
            let at = self.trail_rows.len() - self.words;
            self.dom[v * self.words..(v + 1) * self.words]
                .copy_from_slice(&self.trail_rows[at..]);
            self.trail_rows.truncate(at);
        }
        debug_assert_eq!(self.trail_rows.len(), mark.1);
    }

    /// Layer of the adjacency relation restricted to edges inside cliques of
    /// at least `threshold` vertices, created on demand.
    fn edge_layer(&mut self, target: &SimpleGraph, threshold: u32) -> u8 {
        if threshold <= 2 {
            return 0;
        }
        if let Some(i) = self.thresholds.iter().position(|&t| t == threshold) {
            return i as u8;
        }
        let words = self.words;
        let mut rows = vec![0u64; self.nt * words];
        for (x, y) in target.edges() {
            if edge_clique_upper_bound(target, x, y) >= threshold {
                rows[x as usize * words + (y as usize >> 6)] |= 1 << (y & 63);
                rows[y as usize * words + (x as usize >> 6)] |= 1 << (x & 63);
            }
        }
        self.adj.push(rows);
        self.thresholds.push(threshold);
        (self.adj.len() - 1) as u8
    }

    /// Builds the residue table once the constraints are final.
    fn init_residues(&mut self) {
        const RESIDUE_BUDGET: usize = 64 << 20;
        let arcs: usize = self.cons.iter().map(Vec::len).sum();
        if arcs.saturating_mul(self.nt) > RESIDUE_BUDGET {
            return;
        }
        self.arc_offset = Vec::with_capacity(self.nv + 1);
        let mut total = 0u32;
        for v in 0..self.nv {
            self.arc_offset.push(total);
            total += self.cons[v].len() as u32;
        }
        self.arc_offset.push(total);
        self.residue = vec![u32::MAX; total as usize * self.nt];
    }

    /// Saves a variable's explanation once per branch so it can be unwound.
    fn snapshot(&mut self, var: usize, level: u32) {
        if self.snap_epoch[var] != self.epoch {
            self.snap_epoch[var] = self.epoch;
            self.trail[level as usize].push((var as u32, self.conf[var].clone()));
        }
    }

    fn unwind_level(&mut self, level: u32) {
        while let Some((var, saved)) = self.trail[level as usize].pop() {
            self.conf[var as usize] = saved;
        }
    }

    fn add_constraint(&mut self, u: Vertex, v: Vertex, con: Con) {
        self.cons[u as usize].push((v, con));
        self.cons[v as usize].push((u, con));
    }

    /// Orders `lo`'s image strictly below `hi`'s.
    fn add_order(&mut self, lo: Vertex, hi: Vertex) {
        // When lo changes, hi is revised as the upper side, and vice versa.
        self.cons[lo as usize].push((hi, Con::Above));
        self.cons[hi as usize].push((lo, Con::Below));
    }

    fn fill_domain(&mut self, v: usize) {
        let row = &mut self.root[v * self.words..(v + 1) * self.words];
        for (w, item) in row.iter_mut().enumerate() {
            let lo = w * 64;
            let hi = (lo + 64).min(self.nt);
            *item = if hi > lo { set_range(lo, hi) } else { 0 };
        }
    }

    fn set_domain(&mut self, v: usize, values: &[Vertex]) {
        let row = &mut self.root[v * self.words..(v + 1) * self.words];
        for &x in values {
            row[x as usize >> 6] |= 1 << (x & 63);
        }
    }

    fn restrict_domain(&mut self, v: usize, values: &[Vertex]) {
        let mut mask = vec![0u64; self.words];
        for &x in values {
            mask[x as usize >> 6] |= 1 << (x & 63);
        }
        let row = &mut self.root[v * self.words..(v + 1) * self.words];
        for (r, m) in row.iter_mut().zip(&mask) {
            *r &= m;
        }
    }

    fn domain_size(dom: &[u64], words: usize, v: usize) -> u32 {
        dom[v * words..(v + 1) * words].iter().map(|w| w.count_ones()).sum()
    }

    fn max_value(dom: &[u64], words: usize, v: usize) -> Option<u32> {
        (0..words).rev().find(|&w| dom[v * words + w] != 0).map(|w| {
            ((w as u32) << 6) | (63 - dom[v * words + w].leading_zeros())
        })
    }

    fn min_value(dom: &[u64], words: usize, v: usize) -> Option<u32> {
        (0..words).find(|&w| dom[v * words + w] != 0).map(|w| {
            ((w as u32) << 6) | dom[v * words + w].trailing_zeros()
        })
    }

    /// Drops every value `>= bound` from the row.
    fn mask_below(row: &mut [u64], bound: u32) {
        let cut_word = (bound >> 6) as usize;
        let cut_bit = bound & 63;
        for (w, item) in row.iter_mut().enumerate() {
            if w > cut_word {
                *item = 0;
            } else if w == cut_word {
                *item &= if cut_bit == 0 { 0 } else { (1u64 << cut_bit) - 1 };
            }
        }
    }

    /// Drops every value `<= bound` from the row.
    fn mask_above(row: &mut [u64], bound: u32) {
        let cut_word = (bound >> 6) as usize;
        let cut_bit = bound & 63;
        for (w, item) in row.iter_mut().enumerate() {
            if w < cut_word {
                *item = 0;
            } else if w == cut_word {
                *item &= if cut_bit == 63 { 0 } else { !((1u64 << (cut_bit + 1)) - 1) };
            }
        }
    }

    /// Filtered row of `u` under the constraint against `v`, written into
    /// `out`; true when it differs from the current row.
    fn filtered_row(&mut self, u: usize, v: usize, con: Con, arc: u32, out: &mut Vec<u64>) -> bool {
        let words = self.words;
        out.clear();
        match con {
            Con::Edge(layer) => {
                let cached = !self.residue.is_empty();
                for w in 0..words {
                    let mut bits = self.dom[u * words + w];
                    let mut keep = 0u64;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let x = (w << 6) | b;
                        let rows = &self.adj[layer as usize];
                        let supported = if cached {
                            let slot = arc as usize * self.nt + x;
                            let r = self.residue[slot];
                            if r != u32::MAX
                                && self.dom[v * words + (r as usize >> 6)] & (1 << (r & 63)) != 0
                            {
                                true
                            } else {
                                let found = (0..words).find_map(|k| {
                                    let hits = rows[x * words + k] & self.dom[v * words + k];
                                    (hits != 0)
                                        .then(|| ((k as u32) << 6) | hits.trailing_zeros())
                                });
                                match found {
                                    Some(y) => {
                                        self.residue[slot] = y;
                                        true
                                    }
                                    None => false,
                                }
                            }
                        } else {
                            (0..words)
                                .any(|k| rows[x * words + k] & self.dom[v * words + k] != 0)
                        };
                        if supported {
                            keep |= 1 << b;
                        }
                    }
                    out.push(keep);
                }
            }
            Con::Diff => {
                out.extend_from_slice(&self.dom[u * words..(u + 1) * words]);
                if Self::domain_size(&self.dom, words, v) == 1 {
                    let w = (0..words).find(|&k| self.dom[v * words + k] != 0).unwrap();
                    out[w] &= !self.dom[v * words + w];
                }
            }
            Con::Below => {
                out.extend_from_slice(&self.dom[u * words..(u + 1) * words]);
                // u needs some strictly larger value in dom(v).
                if let Some(max) = Self::max_value(&self.dom, words, v) {
                    Self::mask_below(out, max);
                }
            }
            Con::Above => {
                out.extend_from_slice(&self.dom[u * words..(u + 1) * words]);
                if let Some(min) = Self::min_value(&self.dom, words, v) {
                    Self::mask_above(out, min);
                }
            }
        }
        out[..] != self.dom[u * words..(u + 1) * words]
    }

    /// Revise `u` against `v` in place, saving the old row on the trail;
    /// true when `u`'s domain changed, None on wipeout.
    fn revise(&mut self, u: usize, v: usize, con: Con, arc: u32, level: u32) -> Option<bool> {
        let mut out = std::mem::take(&mut self.scratch);
        let changed = self.filtered_row(u, v, con, arc, &mut out);
        if changed {
            self.save_dom(u, level);
            self.dom[u * self.words..(u + 1) * self.words].copy_from_slice(&out);
        }
        let wiped = changed && out.iter().all(|&w| w == 0);
        self.scratch = out;
        if wiped {
            None
        } else {
            Some(changed)
        }
    }

    /// Arc-consistency from scratch (`seed = None`) or triggered by a change
    /// of one variable. Changed variables are blamed on `level`; a wipeout
    /// returns the emptied variable.
    fn propagate(&mut self, seed: Option<usize>, level: u32) -> Result<(), usize> {
        let mut queue: std::collections::VecDeque<usize> = match seed {
            Some(v) => std::collections::VecDeque::from([v]),
            None => (0..self.nv).collect(),
        };
        let mut queued = vec![false; self.nv];
        for &v in &queue {
            queued[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let arc_base = if self.residue.is_empty() { 0 } else { self.arc_offset[v] };
            // dom(v) changed: revise every constrained neighbor against v.
            for i in 0..self.cons[v].len() {
                let (u, con) = self.cons[v][i];
                match self.revise(u as usize, v, con, arc_base + i as u32, level) {
                    None => {
                        // A pruning inherits everything the support domain
                        // depended on.
                        self.snapshot(u as usize, level);
                        Self::union_conf(&mut self.conf, u as usize, v);
                        self.fail_weight[u as usize] += 1;
                        self.fail_weight[v] += 1;
                        return Err(u as usize);
                    }
                    Some(true) => {
                        self.snapshot(u as usize, level);
                        Self::union_conf(&mut self.conf, u as usize, v);
                        if !queued[u as usize] {
                            queued[u as usize] = true;
                            queue.push_back(u as usize);
                        }
                    }
                    Some(false) => {}
                }
            }
        }
        Ok(())
    }

    /// `conf[dst] |= conf[src]` without cloning.
    fn union_conf(conf: &mut [Conflict], dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let (a, b) = if dst < src {
            let (lo, hi) = conf.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = conf.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        a.union(b);
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Stop::Budget);
        }
        if self.nodes % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(Stop::Budget);
                }
            }
        }
        Ok(())
    }

    /// Search one level: pick the smallest domain of size >= 2 (ties on the
    /// smallest identifier), try its values in ascending order under
    /// arc-consistency, and backjump through levels a failure provably did
    /// not depend on. Backjumping is disabled in count mode.
    fn dfs(&mut self, level: u32) -> Result<Explored, Stop> {
        let mut pick = None;
        for v in 0..self.nv {
            let size = Self::domain_size(&self.dom, self.words, v);
            if size >= 2 && pick.is_none_or(|(_, best)| size < best) {
                pick = Some((v, size));
            }
        }
        let Some((v, _)) = pick else {
            // All singletons and arc-consistent: a solution.
            if self.count_mode {
                self.solutions += 1;
                return Ok(Explored::Exhausted(Conflict::new(self.nv + 2)));
            }
            self.found = Some(extract(&self.dom, self.words, self.nv));
            return Ok(Explored::Found);
        };

        let mut values = Vec::new();
        for w in 0..self.words {
            let mut bits = self.dom[v * self.words + w];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                values.push(((w << 6) | b) as Vertex);
            }
        }
        // Failures below can depend on whatever shrank this domain earlier.
        let mut conflict = self.conf[v].clone();
        self.node_counter += 1;
        let node_stamp = self.node_counter;
        let mut dominance_used = false;
        for x in values {
            // A failed value dooms its unused twin classmates: swapping the
            // two is a target automorphism fixing all current decisions.
            // Below the root the proof depends on the ancestor decisions, so
            // a node that uses it reports a full conflict set.
            let dominance_here = self.dominance && !self.count_mode && (level == 1 || DEEP_DOMINANCE);
            if dominance_here && self.decided_value_count[x as usize] == 0 {
                let cls = self.value_class[x as usize] as usize;
                if self.class_has_twins[cls] {
                    if self.class_stamp[cls] == node_stamp {
                        dominance_used = true;
                        continue;
                    }
                    self.class_stamp[cls] = node_stamp;
                }
            }
            self.tick()?;
            self.epoch += 1;
            let dom_mark = (self.trail_vars.len(), self.trail_rows.len());
            self.save_dom(v, level);
            for k in 0..self.words {
                self.dom[v * self.words + k] = 0;
            }
            self.dom[v * self.words + (x as usize >> 6)] = 1 << (x & 63);
            self.snapshot(v, level);
            self.conf[v].insert(level);
            self.decided_value_count[x as usize] += 1;
            match self.propagate(Some(v), level) {
                Err(wiped) => {
                    let mut cc = self.conf[wiped].clone();
                    cc.remove(level);
                    conflict.union(&cc);
                }
                Ok(()) => match self.dfs(level + 1)? {
                    Explored::Found => {
                        self.decided_value_count[x as usize] -= 1;
                        self.unwind_domains(dom_mark);
                        self.unwind_level(level);
                        return Ok(Explored::Found);
                    }
                    Explored::Exhausted(mut cc) => {
                        if !self.count_mode && !cc.contains(level) {
                            // This decision played no part in the failure:
                            // the remaining values fail the same way.
                            self.decided_value_count[x as usize] -= 1;
                            self.unwind_domains(dom_mark);
                            self.unwind_level(level);
                            return Ok(Explored::Exhausted(cc));
                        }
                        cc.remove(level);
                        conflict.union(&cc);
                    }
                },
            }
            self.decided_value_count[x as usize] -= 1;
            self.unwind_domains(dom_mark);
            self.unwind_level(level);
        }
        if dominance_used && level > 1 {
            // The dominance proofs assumed the exact set of earlier decision
            // values, so this dead end may not transfer across reassignments
            // of any ancestor: report a full conflict.
            for l in 0..=level {
                conflict.insert(l);
            }
        }
        Ok(Explored::Exhausted(conflict))
    }

    /// Filters can empty a domain before any revision runs; wipeouts during
    /// propagation are only detected on change, so catch these up front.
    fn root_wipeout(&self) -> bool {
        (0..self.nv).any(|v| Self::domain_size(&self.dom, self.words, v) == 0)
    }

    fn run(&mut self) -> SolveOutcome {
        if self.nv == 0 {
            return SolveOutcome::Yes(Witness::new(Vec::new()));
        }
        self.init_residues();
        self.dom = self.root.clone();
        if self.root_wipeout() || self.propagate(None, 0).is_err() {
            return SolveOutcome::No;
        }
        match self.dfs(1) {
            Ok(Explored::Found) => SolveOutcome::Yes(Witness::new(self.found.take().unwrap())),
            Ok(Explored::Exhausted(_)) => SolveOutcome::No,
            Err(Stop::Budget) => SolveOutcome::Timeout(self.nodes),
        }
    }

    fn run_count(&mut self) -> CountOutcome {
        self.count_mode = true;
        if self.nv == 0 {
            return CountOutcome::Exact(1);
        }
        self.init_residues();
        self.dom = self.root.clone();
        if self.root_wipeout() || self.propagate(None, 0).is_err() {
            return CountOutcome::Exact(0);
        }
        match self.dfs(1) {
            Ok(_) => CountOutcome::Exact(self.solutions),
            Err(Stop::Budget) => CountOutcome::Timeout { nodes: self.nodes, partial: self.solutions },
        }
    }
}

fn set_range(lo: usize, hi: usize) -> u64 {
    debug_assert!(hi > lo && hi - lo <= 64);
    let width = hi - lo;
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn extract(dom: &[u64], words: usize, nv: usize) -> Vec<Vertex> {
    (0..nv)
        .map(|v| {
            let w = (0..words).find(|&k| dom[v * words + k] != 0).unwrap();
            ((w << 6) as u32) | dom[v * words + w].trailing_zeros()
        })
        .collect()
}

/// Size of a greedily grown clique through `u`: a lower bound on the largest
/// clique containing `u`.
fn clique_lower_bound(g: &SimpleGraph, u: Vertex) -> u32 {
    let mut clique = vec![u];
    for &w in g.neighbors(u) {
        if clique.iter().all(|&c| g.has_edge(c, w)) {
            clique.push(w);
        }
    }
    clique.len() as u32
}

/// Greedy chromatic number of the subgraph induced by `verts`.
fn greedy_chi(h: &SimpleGraph, verts: &[Vertex]) -> u32 {
    let mut colors = vec![0u32; verts.len()];
    let mut used = 0u32;
    for (i, &v) in verts.iter().enumerate() {
        let mut taken = 0u128;
        for (j, &w) in verts.iter().enumerate().take(i) {
            if h.has_edge(v, w) && colors[j] < 128 {
                taken |= 1 << colors[j];
            }
        }
        let c = (!taken).trailing_zeros();
        colors[i] = c;
        used = used.max(c + 1);
    }
    used
}

/// Upper bound on the largest clique containing `x`: one plus the greedy
/// chromatic number of the subgraph induced by the neighborhood of `x`.
fn clique_upper_bound(h: &SimpleGraph, x: Vertex) -> u32 {
    greedy_chi(h, h.neighbors(x)) + 1
}

/// Size of a greedily grown clique through the edge `(u, v)`.
fn edge_clique_lower_bound(g: &SimpleGraph, u: Vertex, v: Vertex) -> u32 {
    let mut clique = vec![u, v];
    for &w in g.neighbors(u) {
        if g.has_edge(w, v) && clique.iter().all(|&c| c == w || g.has_edge(c, w)) {
            clique.push(w);
        }
    }
    clique.len() as u32
}

/// Upper bound on the largest clique containing the edge `(x, y)`.
fn edge_clique_upper_bound(h: &SimpleGraph, x: Vertex, y: Vertex) -> u32 {
    let common: Vec<Vertex> = h
        .neighbors(x)
        .iter()
        .copied()
        .filter(|&w| h.has_edge(w, y))
        .collect();
    greedy_chi(h, &common) + 2
}

/// A clique through a pattern vertex maps injectively onto a clique through
/// its image, so images whose clique bound is too small can be discarded up
/// front. This is what lets rigid clique gadgets collapse instead of being
/// refuted vertex by vertex.
fn apply_clique_filter(e: &mut Engine, g: &SimpleGraph, h: &SimpleGraph) {
    let ub: Vec<u32> = (0..h.n()).map(|x| clique_upper_bound(h, x)).collect();
    for u in 0..g.n() {
        let lb = clique_lower_bound(g, u);
        let keep: Vec<Vertex> = (0..h.n()).filter(|&x| ub[x as usize] >= lb).collect();
        if keep.len() < h.n() as usize {
            e.restrict_domain(u as usize, &keep);
        }
    }
}

/// Classes of pattern vertices with identical closed neighborhoods. Members
/// of one class are pairwise adjacent and mutually interchangeable in any
/// homomorphism, so their images can be forced into ascending order without
/// changing the decision. Not applied in counting mode.
fn closed_twin_classes(g: &SimpleGraph) -> Vec<Vec<Vertex>> {
    let mut groups: std::collections::HashMap<Vec<Vertex>, Vec<Vertex>> =
        std::collections::HashMap::new();
    for v in 0..g.n() {
        let mut key = g.neighbors(v).to_vec();
        key.push(v);
        key.sort_unstable();
        groups.entry(key).or_default().push(v);
    }
    let mut classes: Vec<Vec<Vertex>> = groups.into_values().filter(|c| c.len() > 1).collect();
    classes.sort();
    classes
}

/// Interchangeability is conditional on equal lists when lists exist.
fn order_twins(e: &mut Engine, g: &SimpleGraph, lists: Option<&[Vec<Vertex>]>) {
    for class in closed_twin_classes(g) {
        for pair in class.windows(2) {
            let same_list = match lists {
                Some(ls) => ls[pair[0] as usize] == ls[pair[1] as usize],
                None => true,
            };
            if same_list {
                e.add_order(pair[0], pair[1]);
            }
        }
    }
}

/// Adjacency constraints for every pattern edge, each at its clique
/// threshold: the image of an edge inside a `K_t` must itself lie inside a
/// clique of at least `t` vertices.
fn add_edge_constraints(e: &mut Engine, g: &SimpleGraph, h: &SimpleGraph) {
    for (u, v) in g.edges() {
        let layer = e.edge_layer(h, edge_clique_lower_bound(g, u, v));
        e.add_constraint(u, v, Con::Edge(layer));
    }
}

fn hom_engine(g: &SimpleGraph, h: &SimpleGraph, budget: &SolveBudget) -> Engine {
    let mut e = Engine::new(h, g.n() as usize, budget);
    for v in 0..g.n() as usize {
        e.fill_domain(v);
    }
    add_edge_constraints(&mut e, g, h);
    apply_clique_filter(&mut e, g, h);
    e
}

/// Decides whether a homomorphism `g -> h` exists.
pub fn solve_hom(g: &SimpleGraph, h: &SimpleGraph, budget: SolveBudget) -> SolveOutcome {
    solve_hom_with_stats(g, h, budget).0
}

/// As [`solve_hom`], also reporting the number of explored search nodes.
pub fn solve_hom_with_stats(g: &SimpleGraph, h: &SimpleGraph, budget: SolveBudget) -> (SolveOutcome, u64) {
    let mut e = hom_engine(g, h, &budget);
    order_twins(&mut e, g, None);
    e.dominance = true;
    let out = e.run();
    (out, e.nodes)
}

/// Counts all homomorphisms `g -> h` by exhaustive traversal.
pub fn count_hom(g: &SimpleGraph, h: &SimpleGraph, budget: SolveBudget) -> CountOutcome {
    hom_engine(g, h, &budget).run_count()
}

/// Decides whether a list homomorphism exists; initial domains are the
/// lists, narrowed by the clique filter.
pub fn solve_listhom(inst: &ListHomInstance, budget: SolveBudget) -> SolveOutcome {
    let g = inst.pattern();
    let mut e = Engine::new(inst.target(), g.n() as usize, &budget);
    for v in 0..g.n() {
        e.set_domain(v as usize, inst.list(v));
    }
    add_edge_constraints(&mut e, g, inst.target());
    apply_clique_filter(&mut e, g, inst.target());
    order_twins(&mut e, g, Some(inst.lists()));
    e.run()
}

/// Kinds that map neighborhoods injectively cannot shrink degrees.
fn apply_degree_filter(e: &mut Engine, g: &SimpleGraph, h: &SimpleGraph) {
    for u in 0..g.n() {
        let keep: Vec<Vertex> = (0..h.n()).filter(|&x| h.degree(x) >= g.degree(u)).collect();
        if keep.len() < h.n() as usize {
            e.restrict_domain(u as usize, &keep);
        }
    }
}

/// Decides whether a locally injective homomorphism exists: homomorphism
/// constraints plus distinctness over square edges that are not base edges.
pub fn solve_li_hom(g: &SimpleGraph, h: &SimpleGraph, budget: SolveBudget) -> SolveOutcome {
    let mut e = hom_engine(g, h, &budget);
    for (u, v) in g.square().edges() {
        if !g.has_edge(u, v) {
            e.add_constraint(u, v, Con::Diff);
        }
    }
    apply_degree_filter(&mut e, g, h);
    order_twins(&mut e, g, None);
    e.dominance = true;
    e.run()
}

/// Decides whether `g` is a subgraph of `h`: homomorphism constraints plus
/// all-different, decomposed into pairwise distinctness.
pub fn solve_si(g: &SimpleGraph, h: &SimpleGraph, budget: SolveBudget) -> SolveOutcome {
    solve_si_with_stats(g, h, budget).0
}

/// As [`solve_si`], also reporting the number of explored search nodes.
pub fn solve_si_with_stats(g: &SimpleGraph, h: &SimpleGraph, budget: SolveBudget) -> (SolveOutcome, u64) {
    if g.n() > h.n() {
        // Pairwise distinctness alone does not see the pigeonhole bound.
        return (SolveOutcome::No, 0);
    }
    let mut e = hom_engine(g, h, &budget);
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            e.add_constraint(u, v, Con::Diff);
        }
    }
    apply_degree_filter(&mut e, g, h);
    order_twins(&mut e, g, None);
    e.dominance = true;
    let out = e.run();
    (out, e.nodes)
}

/// Decides `k`-colorability as `solve_hom(g, K_k)`, exactly that equivalence.
pub fn solve_kcol(g: &SimpleGraph, k: u32, budget: SolveBudget) -> SolveOutcome {
    assert!(k >= 1);
    solve_hom(g, &SimpleGraph::complete(k), budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> SimpleGraph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        SimpleGraph::new(10, edges).unwrap()
    }

    #[test]
    fn odd_cycle_has_no_hom_to_edge() {
        let out = solve_hom(&SimpleGraph::cycle(5), &SimpleGraph::complete(2), SolveBudget::default());
        assert_eq!(out, SolveOutcome::No);
    }

    #[test]
    fn even_cycle_maps_to_edge() {
        let g = SimpleGraph::cycle(4);
        let h = SimpleGraph::complete(2);
        let out = solve_hom(&g, &h, SolveBudget::default());
        let w = out.witness().expect("C4 is bipartite");
        check_witness(&Problem::Hom { pattern: &g, target: &h }, w).unwrap();
    }

    #[test]
    fn c5_endomorphism_count_is_ten() {
        let c5 = SimpleGraph::cycle(5);
        assert_eq!(count_hom(&c5, &c5, SolveBudget::default()), CountOutcome::Exact(10));
    }

    #[test]
    fn k3_endomorphism_count_is_six() {
        let k3 = SimpleGraph::complete(3);
        assert_eq!(count_hom(&k3, &k3, SolveBudget::default()), CountOutcome::Exact(6));
    }

    #[test]
    fn empty_list_is_no_without_search() {
        let inst = ListHomInstance::new(
            SimpleGraph::path(2),
            SimpleGraph::complete(2),
            vec![vec![], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(solve_listhom(&inst, SolveBudget::default()), SolveOutcome::No);
    }

    #[test]
    fn full_lists_reduce_to_hom() {
        for (g, h) in [
            (SimpleGraph::cycle(5), SimpleGraph::complete(3)),
            (SimpleGraph::cycle(5), SimpleGraph::complete(2)),
            (petersen(), SimpleGraph::complete(3)),
        ] {
            let lists = vec![(0..h.n()).collect::<Vec<_>>(); g.n() as usize];
            let inst = ListHomInstance::new(g.clone(), h.clone(), lists).unwrap();
            let a = solve_listhom(&inst, SolveBudget::default()).decision();
            let b = solve_hom(&g, &h, SolveBudget::default()).decision();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn locally_injective_examples() {
        let c5 = SimpleGraph::cycle(5);
        assert!(matches!(solve_li_hom(&c5, &c5, SolveBudget::default()), SolveOutcome::Yes(_)));
        let k2 = SimpleGraph::complete(2);
        assert!(matches!(solve_li_hom(&k2, &k2, SolveBudget::default()), SolveOutcome::Yes(_)));
        // Brute force over all 2^3 maps: the endpoints of P3 share the middle
        // vertex, so their images must differ, but both must be the non-image
        // of the middle vertex.
        let p3 = SimpleGraph::path(3);
        let mut any = false;
        for bits in 0..8u32 {
            let map = vec![bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
            let hom_ok = map[0] != map[1] && map[1] != map[2];
            let li_ok = map[0] != map[2];
            any |= hom_ok && li_ok;
        }
        assert!(!any);
        assert_eq!(solve_li_hom(&p3, &k2, SolveBudget::default()), SolveOutcome::No);
    }

    #[test]
    fn subgraph_iso_examples() {
        let b = SolveBudget::default();
        assert_eq!(solve_si(&SimpleGraph::complete(3), &SimpleGraph::cycle(4), b), SolveOutcome::No);
        assert!(matches!(solve_si(&SimpleGraph::cycle(4), &SimpleGraph::complete(4), b), SolveOutcome::Yes(_)));
        assert!(matches!(solve_si(&SimpleGraph::path(3), &SimpleGraph::complete(3), b), SolveOutcome::Yes(_)));
        // Larger pattern than host is a No by injectivity alone.
        assert_eq!(solve_si(&SimpleGraph::edgeless(3), &SimpleGraph::complete(2), b), SolveOutcome::No);
    }

    #[test]
    fn coloring_examples() {
        let b = SolveBudget::default();
        assert_eq!(solve_kcol(&SimpleGraph::complete(4), 3, b), SolveOutcome::No);
        assert!(matches!(solve_kcol(&SimpleGraph::cycle(5), 3, b), SolveOutcome::Yes(_)));
        assert!(matches!(solve_kcol(&petersen(), 3, b), SolveOutcome::Yes(_)));
    }

    #[test]
    fn kcol_is_hom_to_complete_bit_for_bit() {
        for (g, k) in [
            (SimpleGraph::cycle(5), 2),
            (SimpleGraph::cycle(5), 3),
            (SimpleGraph::complete(4), 3),
            (petersen(), 3),
        ] {
            let a = solve_kcol(&g, k, SolveBudget::default());
            let b = solve_hom(&g, &SimpleGraph::complete(k), SolveBudget::default());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witness_checker_examples() {
        let c5 = SimpleGraph::cycle(5);
        let identity = Witness::new((0..5).collect());
        check_witness(&Problem::Hom { pattern: &c5, target: &c5 }, &identity).unwrap();

        let k2 = SimpleGraph::complete(2);
        let constant = Witness::new(vec![0, 0]);
        assert_eq!(
            check_witness(&Problem::Hom { pattern: &k2, target: &k2 }, &constant),
            Err(Violation::EdgeNotPreserved { u: 0, v: 1 })
        );
    }

    #[test]
    fn budget_exhaustion_reports_timeout() {
        let g = petersen();
        let out = solve_hom(&g, &SimpleGraph::cycle(11), SolveBudget::nodes(3));
        assert!(matches!(out, SolveOutcome::Timeout(_)));
    }

    #[test]
    fn deterministic_repeat_runs() {
        let g = petersen();
        let h = SimpleGraph::complete(3);
        let a = solve_hom(&g, &h, SolveBudget::default());
        let b = solve_hom(&g, &h, SolveBudget::default());
        assert_eq!(a, b);
    }
}
