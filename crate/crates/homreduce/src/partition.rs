//! Balanced colorings and groupings.
//!
//! A balanced coloring is proper on the square of the input graph, keeps
//! every color class small, and keeps the number of edges between any two
//! color classes below a cap derived from the class sizes. A grouping
//! partitions the vertices into buckets that are independent in the base
//! graph, pairwise joined by at most one edge, and labeled so that the labels
//! are proper on the square of the quotient. Every property is recomputed by
//! a post-hoc verifier; the constructions are never trusted.

use std::collections::HashMap;

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::graph::{greedy_coloring, Color, Coloring, SimpleGraph, Vertex};

/// Exact non-negative rational, kept exact so caps and windows never suffer
/// float rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub const fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        Ratio { num, den }
    }

    pub const fn int(n: u64) -> Self {
        Ratio { num: n, den: 1 }
    }

    /// `ceil(self * a / b)`.
    pub fn ceil_mul_div(&self, a: u64, b: u64) -> u64 {
        let num = self.num as u128 * a as u128;
        let den = self.den as u128 * b as u128;
        num.div_ceil(den) as u64
    }

    /// `ceil(self * a)`.
    pub fn ceil_mul(&self, a: u64) -> u64 {
        self.ceil_mul_div(a, 1)
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Parameters of the balanced-coloring and grouping constructions.
///
/// `strict` additionally enforces the admissible window on the color count
/// and the derived bucket bound; with `strict` off the greedy construction is
/// merely attempted and the verifiers are the only authority.
#[derive(Clone, Debug)]
pub struct BalanceParams {
    pub alpha: Ratio,
    pub beta: Ratio,
    pub tau: Ratio,
    pub lambda: Ratio,
    pub degree_bound: u32,
    pub strict: bool,
}

impl BalanceParams {
    /// The constants the guarantees are proved for, instantiated at degree
    /// bound `d`: `alpha = 4`, `beta = 16 alpha^2 d^4`, `tau = 16(d^2+1)/11`,
    /// `lambda = 2 d beta`.
    pub fn paper(d: u32) -> Self {
        let d = d as u64;
        let beta = 256 * d.pow(4);
        BalanceParams {
            alpha: Ratio::int(4),
            beta: Ratio::int(beta),
            tau: Ratio::new(16 * (d * d + 1), 11),
            lambda: Ratio::int(2 * d * beta),
            degree_bound: d as u32,
            strict: true,
        }
    }

    /// Desk-scale parameters: same `alpha` and window shape, a small `beta`,
    /// and no window enforcement.
    pub fn relaxed(d: u32) -> Self {
        let beta = 100;
        BalanceParams {
            alpha: Ratio::int(4),
            beta: Ratio::int(beta),
            tau: Ratio::new(16 * (d as u64 * d as u64 + 1), 11),
            lambda: Ratio::int(2 * d as u64 * beta),
            degree_bound: d,
            strict: false,
        }
    }

    /// The admissible color counts `tau <= L <= n(d^2-1)/(2 d^2 (d^2+1))`,
    /// or `None` when the window is empty.
    pub fn admissible_color_counts(&self, n: u64) -> Option<std::ops::RangeInclusive<u64>> {
        let d = self.degree_bound as u64;
        if d < 2 {
            return None;
        }
        let lo = self.tau.num.div_ceil(self.tau.den).max(1);
        let hi = (n as u128 * (d * d - 1) as u128 / (2 * d * d * (d * d + 1)) as u128) as u64;
        (lo <= hi).then_some(lo..=hi)
    }

    /// Smallest integer color count `>= lambda * r`.
    pub fn color_count_for_group_size(&self, r: u64) -> u64 {
        self.lambda.ceil_mul(r)
    }

    /// Largest admissible group size `r <= sqrt(n / (2 lambda))`.
    pub fn max_group_size(&self, n: u64) -> u64 {
        let mut r = 0u64;
        while self.group_size_admissible(r + 1, n) {
            r += 1;
        }
        r
    }

    fn group_size_admissible(&self, r: u64, n: u64) -> bool {
        // r <= sqrt(n / (2 lambda))  <=>  2 * lambda * r^2 <= n
        let lhs = 2 * self.lambda.num as u128 * r as u128 * r as u128;
        lhs <= n as u128 * self.lambda.den as u128
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("color count {l} lies outside the admissible window {window}")]
    WindowEmpty { l: u64, window: String },
    #[error("maximum degree {found} exceeds the parameter degree bound {bound}")]
    DegreeBoundExceeded { found: usize, bound: u32 },
    #[error("no vacant color for vertex {vertex}")]
    NoVacantColor { vertex: Vertex },
    #[error("group size {r} exceeds the admissible maximum {max}")]
    GroupSizeTooLarge { r: u64, max: u64 },
    #[error("grouping produced {buckets} buckets, above the bound {bound}")]
    BucketBoundExceeded { buckets: usize, bound: u64 },
}

/// Exact recomputation of everything the balanced coloring promises.
#[derive(Clone, Debug)]
pub struct BalanceReport {
    /// `|c^{-1}(i)|`, indexed by `i - 1`.
    pub class_sizes: Vec<u64>,
    /// Edge counts `k_{i,j}` for the class pairs that carry edges, keyed by
    /// `(i, j)` with `i < j`.
    pub pair_edges: HashMap<(Color, Color), u64>,
    /// Cap `ceil(alpha n / L)` on every class size.
    pub class_cap: u64,
    pub proper_on_square: bool,
    /// A square edge with equal endpoint colors, when one exists.
    pub square_violation: Option<(Vertex, Vertex)>,
    pub class_sizes_ok: bool,
    pub pair_caps_ok: bool,
    /// A pair `(i, j, k_ij, cap_ij)` exceeding its cap, when one exists.
    pub pair_violation: Option<(Color, Color, u64, u64)>,
}

impl BalanceReport {
    pub fn all_pass(&self) -> bool {
        self.proper_on_square && self.class_sizes_ok && self.pair_caps_ok
    }

    /// Cap `K_{i,j}` for a class pair under `params`, given this report's
    /// class sizes.
    pub fn pair_cap(&self, params: &BalanceParams, l: u64, i: Color, j: Color) -> u64 {
        let si = self.class_sizes[i as usize - 1];
        let sj = self.class_sizes[j as usize - 1];
        params.beta.ceil_mul_div(si.min(sj), l)
    }
}

fn proper_on_square_scan(g: &SimpleGraph, colors: &[Color]) -> Option<(Vertex, Vertex)> {
    let check_vertex = |v: Vertex| -> Option<(Vertex, Vertex)> {
        let cv = colors[v as usize];
        g.two_ball(v)
            .into_iter()
            .find(|&u| u > v && colors[u as usize] == cv)
            .map(|u| (v, u))
    };
    #[cfg(feature = "parallel")]
    {
        if (0..g.n()).into_par_iter().all(|v| check_vertex(v).is_none()) {
            return None;
        }
    }
    (0..g.n()).find_map(check_vertex)
}

/// Recomputes class sizes, pair edge counts and all three balanced-coloring
/// properties of `c` from scratch.
pub fn verify_balanced(g: &SimpleGraph, c: &Coloring, params: &BalanceParams) -> BalanceReport {
    let n = g.n() as u64;
    let l = c.color_count() as u64;
    let mut class_sizes = vec![0u64; l as usize];
    for &col in c.colors() {
        class_sizes[col as usize - 1] += 1;
    }

    let mut pair_edges: HashMap<(Color, Color), u64> = HashMap::new();
    for (u, v) in g.edges() {
        let (cu, cv) = (c.color(u), c.color(v));
        if cu != cv {
            let key = (cu.min(cv), cu.max(cv));
            *pair_edges.entry(key).or_insert(0) += 1;
        }
    }

    let square_violation = proper_on_square_scan(g, c.colors());
    let class_cap = params.alpha.ceil_mul_div(n, l);
    let class_sizes_ok = class_sizes.iter().all(|&s| s <= class_cap);

    let mut pair_violation = None;
    for (&(i, j), &k) in &pair_edges {
        let cap = params
            .beta
            .ceil_mul_div(class_sizes[i as usize - 1].min(class_sizes[j as usize - 1]), l);
        if k > cap {
            pair_violation = Some((i, j, k, cap));
            break;
        }
    }

    BalanceReport {
        class_sizes,
        pair_edges,
        class_cap,
        proper_on_square: square_violation.is_none(),
        square_violation,
        class_sizes_ok,
        pair_caps_ok: pair_violation.is_none(),
        pair_violation,
    }
}

/// Finds a coloring of `g` in `l` colors that is proper on the square, has
/// every class size at most `ceil(alpha n / l)`, and keeps every pair edge
/// count `k_{i,j}` below its cap `K_{i,j}`.
///
/// The construction precolors a greedy independent set of the square
/// equitably and then extends it vertex by vertex, assigning the smallest
/// color none of the three constraints forbids. With `params.strict` the
/// window `tau <= l <= n(d^2-1)/(2 d^2 (d^2+1))` and the degree bound are
/// enforced up front, and the extension is guaranteed to succeed.
pub fn balanced_coloring(
    g: &SimpleGraph,
    l: u64,
    params: &BalanceParams,
) -> Result<Coloring, PartitionError> {
    balanced_coloring_impl(g, l, params, params.strict)
}

pub(crate) fn balanced_coloring_impl(
    g: &SimpleGraph,
    l: u64,
    params: &BalanceParams,
    enforce_window: bool,
) -> Result<Coloring, PartitionError> {
    assert!(l >= 1, "color count must be positive");
    let n = g.n() as u64;
    if enforce_window {
        let found = g.max_degree();
        if found > params.degree_bound as usize {
            return Err(PartitionError::DegreeBoundExceeded { found, bound: params.degree_bound });
        }
        let window = params.admissible_color_counts(n);
        let ok = window.as_ref().is_some_and(|w| w.contains(&l));
        if !ok {
            let window = window
                .map(|w| format!("[{}, {}]", w.start(), w.end()))
                .unwrap_or_else(|| "(empty)".to_string());
            return Err(PartitionError::WindowEmpty { l, window });
        }
    }
    if n == 0 {
        return Ok(Coloring::new(l as Color, Vec::new()).unwrap());
    }

    let max_deg = g.max_degree() as u64;
    // The square has maximum degree at most d^2, so a greedy independent set
    // of this size always exists.
    let is_target = (n as usize).div_ceil((max_deg * max_deg + 1) as usize);
    let seed_set = greedy_independent_set_on_square(g, is_target);

    let mut colors: Vec<Color> = vec![0; n as usize];
    let mut sizes: Vec<u64> = vec![0; l as usize + 1];
    for (t, &v) in seed_set.iter().enumerate() {
        let c = (t as u64 % l) as Color + 1;
        colors[v as usize] = c;
        sizes[c as usize] += 1;
    }

    let class_cap = params.alpha.ceil_mul_div(n, l);
    let mut kmap: HashMap<(Color, Color), u32> = HashMap::new();
    let mut proper_stamp = vec![0u32; l as usize + 2];
    let mut stamp = 0u32;
    // Colors below this are at the class cap and stay there.
    let mut scan_start: u64 = 1;

    for v in 0..g.n() {
        if colors[v as usize] != 0 {
            continue;
        }
        stamp += 1;
        for u in g.two_ball(v) {
            let c = colors[u as usize];
            if c != 0 {
                proper_stamp[c as usize] = stamp;
            }
        }
        // Colors of already-colored neighbors; pairwise distinct because the
        // partial coloring is proper on the square.
        let neighbor_colors: Vec<Color> = g
            .neighbors(v)
            .iter()
            .map(|&u| colors[u as usize])
            .filter(|&c| c != 0)
            .collect();

        while scan_start <= l && sizes[scan_start as usize] >= class_cap {
            scan_start += 1;
        }
        let mut chosen = None;
        let mut c = scan_start;
        while c <= l {
            let allowed = proper_stamp[c as usize] != stamp
                && sizes[c as usize] < class_cap
                && neighbor_colors.iter().all(|&j| {
                    let key = (j.min(c as Color), j.max(c as Color));
                    let k = kmap.get(&key).copied().unwrap_or(0) as u64;
                    let min_size = (sizes[c as usize] + 1).min(sizes[j as usize]);
                    k + 1 <= params.beta.ceil_mul_div(min_size, l)
                });
            if allowed {
                chosen = Some(c as Color);
                break;
            }
            c += 1;
        }
        let c = chosen.ok_or(PartitionError::NoVacantColor { vertex: v })?;
        colors[v as usize] = c;
        sizes[c as usize] += 1;
        for &j in &neighbor_colors {
            *kmap.entry((j.min(c), j.max(c))).or_insert(0) += 1;
        }
    }

    Ok(Coloring::new(l as Color, colors).unwrap())
}

/// Greedy independent set of the square, computed without materializing the
/// square. Matches `greedy_independent_set(&g.square(), target)`.
fn greedy_independent_set_on_square(g: &SimpleGraph, target: usize) -> Vec<Vertex> {
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
        for u in g.two_ball(v) {
            excluded[u as usize] = true;
        }
    }
    picked
}

/// The auxiliary constraint graph `F_i` on the class `c^{-1}(i)`: two class
/// members are joined when some neighbor of one shares a color with some
/// neighbor of the other. Returns the graph on local indices together with
/// the sorted class members the indices refer to.
pub fn constraint_graph(g: &SimpleGraph, c: &Coloring, i: Color) -> (SimpleGraph, Vec<Vertex>) {
    let members: Vec<Vertex> = (0..g.n()).filter(|&v| c.color(v) == i).collect();
    let graph = constraint_graph_on(g, c, &members);
    (graph, members)
}

fn constraint_graph_on(g: &SimpleGraph, c: &Coloring, members: &[Vertex]) -> SimpleGraph {
    let neighbor_colors: Vec<Vec<Color>> = members
        .iter()
        .map(|&v| {
            let mut cols: Vec<Color> = g.neighbors(v).iter().map(|&u| c.color(u)).collect();
            cols.sort_unstable();
            cols.dedup();
            cols
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if shares_value(&neighbor_colors[a], &neighbor_colors[b]) {
                edges.push((a as Vertex, b as Vertex));
            }
        }
    }
    SimpleGraph::new(members.len() as u32, edges).unwrap()
}

fn shares_value(a: &[Color], b: &[Color]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// A partition of the base graph into buckets, the quotient graph over the
/// buckets, and a bucket labeling.
#[derive(Clone, Debug)]
pub struct GroupedGraph {
    base: SimpleGraph,
    base_coloring: Coloring,
    buckets: Vec<Vec<Vertex>>,
    vertex_bucket: Vec<u32>,
    quotient: SimpleGraph,
    labels: Coloring,
}

impl GroupedGraph {
    pub fn base(&self) -> &SimpleGraph {
        &self.base
    }

    /// The balanced coloring the buckets were carved from.
    pub fn base_coloring(&self) -> &Coloring {
        &self.base_coloring
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    /// Members of bucket `b`, sorted.
    pub fn bucket(&self, b: u32) -> &[Vertex] {
        &self.buckets[b as usize]
    }

    pub fn buckets(&self) -> &[Vec<Vertex>] {
        &self.buckets
    }

    pub fn bucket_of(&self, v: Vertex) -> u32 {
        self.vertex_bucket[v as usize]
    }

    /// Quotient graph: buckets are adjacent when some base edge joins them.
    pub fn quotient(&self) -> &SimpleGraph {
        &self.quotient
    }

    /// Bucket labels, a coloring of the quotient.
    pub fn labels(&self) -> &Coloring {
        &self.labels
    }

    pub fn label(&self, b: u32) -> Color {
        self.labels.color(b)
    }
}

/// Post-hoc check of the four grouping properties.
#[derive(Clone, Debug)]
pub struct GroupingReport {
    pub bucket_count: usize,
    /// Item 1: at most `n / r` buckets.
    pub bucket_bound_ok: bool,
    /// Item 2: labels proper on the square of the quotient.
    pub labels_proper_on_quotient_square: bool,
    /// Item 3: every bucket independent in the base graph.
    pub buckets_independent: bool,
    /// Item 4: at most one base edge between any two buckets.
    pub pair_edge_bound_ok: bool,
}

impl GroupingReport {
    pub fn items_2_to_4(&self) -> bool {
        self.labels_proper_on_quotient_square && self.buckets_independent && self.pair_edge_bound_ok
    }

    pub fn all_pass(&self) -> bool {
        self.bucket_bound_ok && self.items_2_to_4()
    }
}

/// Independently rechecks the four grouping properties of `gg` for group
/// size `r`.
pub fn verify_grouping(gg: &GroupedGraph, r: u64) -> GroupingReport {
    let n = gg.base.n() as u64;
    let bucket_count = gg.bucket_count();
    let bucket_bound_ok = bucket_count as u64 * r <= n;

    let labels_proper_on_quotient_square =
        proper_on_square_scan(&gg.quotient, gg.labels.colors()).is_none();

    let mut buckets_independent = true;
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(gg.base.m());
    for (u, v) in gg.base.edges() {
        let (bu, bv) = (gg.bucket_of(u), gg.bucket_of(v));
        if bu == bv {
            buckets_independent = false;
        } else {
            pairs.push((bu.min(bv), bu.max(bv)));
        }
    }
    pairs.sort_unstable();
    let pair_edge_bound_ok = pairs.windows(2).all(|w| w[0] != w[1]);

    GroupingReport {
        bucket_count,
        bucket_bound_ok,
        labels_proper_on_quotient_square,
        buckets_independent,
        pair_edge_bound_ok,
    }
}

/// Grouping with the color count tied to the group size, `L = lambda * r`.
/// In strict mode the group-size precondition `r <= sqrt(n / (2 lambda))`
/// and the bucket bound are enforced.
pub fn grouping(g: &SimpleGraph, r: u64, params: &BalanceParams) -> Result<GroupedGraph, PartitionError> {
    let n = g.n() as u64;
    if params.strict && !params.group_size_admissible(r, n) {
        return Err(PartitionError::GroupSizeTooLarge { r, max: params.max_group_size(n) });
    }
    let l = params.color_count_for_group_size(r);
    grouping_with_color_count(g, r, l, params)
}

/// Grouping from an explicitly chosen color count.
///
/// Runs the balanced coloring, splits each color class along its constraint
/// graph with a greedy coloring, and emits every resulting independent set as
/// a bucket. The balanced coloring runs without the strict window check: the
/// guarantees downstream constructions rely on are the verified items, not
/// the window.
pub fn grouping_with_color_count(
    g: &SimpleGraph,
    r: u64,
    l: u64,
    params: &BalanceParams,
) -> Result<GroupedGraph, PartitionError> {
    let n = g.n() as u64;
    let coloring = balanced_coloring_impl(g, l, params, false)?;

    let mut classes: Vec<Vec<Vertex>> = vec![Vec::new(); l as usize];
    for v in 0..g.n() {
        classes[coloring.color(v) as usize - 1].push(v);
    }

    // Buckets of one color class: the greedy color classes of its constraint
    // graph. Classes are independent of each other, so they may be processed
    // in parallel; the emitted order is the sequential one either way.
    let split_class = |members: &Vec<Vertex>| -> Vec<Vec<Vertex>> {
        if members.is_empty() {
            return Vec::new();
        }
        let f = constraint_graph_on(g, &coloring, members);
        let order: Vec<Vertex> = (0..f.n()).collect();
        let fc = greedy_coloring(&f, &order).unwrap();
        let mut out = vec![Vec::new(); fc.color_count() as usize];
        for (local, &v) in members.iter().enumerate() {
            out[fc.color(local as Vertex) as usize - 1].push(v);
        }
        out.retain(|b| !b.is_empty());
        out
    };

    #[cfg(feature = "parallel")]
    let per_class: Vec<Vec<Vec<Vertex>>> = classes.par_iter().map(split_class).collect();
    #[cfg(not(feature = "parallel"))]
    let per_class: Vec<Vec<Vec<Vertex>>> = classes.iter().map(split_class).collect();

    let mut buckets: Vec<Vec<Vertex>> = Vec::new();
    let mut label_vec: Vec<Color> = Vec::new();
    for (idx, class_buckets) in per_class.into_iter().enumerate() {
        for b in class_buckets {
            buckets.push(b);
            label_vec.push(idx as Color + 1);
        }
    }

    if params.strict && buckets.len() as u64 * r > n {
        return Err(PartitionError::BucketBoundExceeded {
            buckets: buckets.len(),
            bound: n / r.max(1),
        });
    }

    let mut vertex_bucket = vec![0u32; g.n() as usize];
    for (b, members) in buckets.iter().enumerate() {
        for &v in members {
            vertex_bucket[v as usize] = b as u32;
        }
    }

    let mut qedges: Vec<(u32, u32)> = Vec::with_capacity(g.m());
    for (u, v) in g.edges() {
        let (bu, bv) = (vertex_bucket[u as usize], vertex_bucket[v as usize]);
        if bu != bv {
            qedges.push((bu.min(bv), bu.max(bv)));
        }
    }
    qedges.sort_unstable();
    qedges.dedup();
    let quotient = SimpleGraph::new(buckets.len() as u32, qedges).unwrap();
    let labels = Coloring::new(l as Color, label_vec).unwrap();

    Ok(GroupedGraph { base: g.clone(), base_coloring: coloring, buckets, vertex_bucket, quotient, labels })
}
