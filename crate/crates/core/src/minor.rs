//! Depth-1 minors of complete bipartite graphs.
//!
//! A depth-1 minor model maps every minor vertex to a star of `G` (a center
//! plus some of its neighbors); the stars are pairwise disjoint and every
//! minor edge is witnessed by a `G`-edge between the two stars. The searches
//! here are exhaustive backtracking over star centers and lazily added
//! leaves, meant for graphs of a few dozen vertices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId, VertexSet};

pub const DEFAULT_MINOR_CAP: usize = 40;
pub const DEFAULT_BALL_CAP: usize = 60;
/// Radius of the neighborhood searched for canonical subgraphs.
pub const CANONICAL_RADIUS: usize = 6;
/// Upper bound on the size of a minimal subgraph with a depth-1 `K_{3,3}`.
pub const CANONICAL_MAX_VERTICES: usize = 24;
const MASK_BITS: usize = 128;

/// Names a vertex of `K_{3,t}`: `Left(0..3)` or `Right(0..t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchLabel {
    Left(u32),
    Right(u32),
}

/// Witness that `K_{3,t}` is a depth-1 minor of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub branch_sets: BTreeMap<BranchLabel, VertexSet>,
}

impl MinorModel {
    pub fn vertices(&self) -> VertexSet {
        self.branch_sets.values().flatten().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelDefect {
    WrongShape,
    Overlap(VertexId),
    NotAStar(BranchLabel),
    MissingEdge(BranchLabel, BranchLabel),
}

/// Independent check of a `K_{3,t}` model: the right labels, disjoint
/// branch sets that each contain a vertex adjacent to all other members, and
/// a `G`-edge for each of the `3·t` minor edges.
pub fn validate_k3t_model(g: &Graph, model: &MinorModel, t: usize) -> core::result::Result<(), ModelDefect> {
    let expected: BTreeSet<BranchLabel> = (0..3)
        .map(BranchLabel::Left)
        .chain((0..t as u32).map(BranchLabel::Right))
        .collect();
    if model.branch_sets.keys().copied().collect::<BTreeSet<_>>() != expected {
        return Err(ModelDefect::WrongShape);
    }
    let mut seen = VertexSet::new();
    for (&label, set) in &model.branch_sets {
        for &v in set {
            if !g.contains(v) || !seen.insert(v) {
                return Err(ModelDefect::Overlap(v));
            }
        }
        let star = set
            .iter()
            .any(|&c| set.iter().all(|&x| x == c || g.has_edge(c, x)));
        if !star {
            return Err(ModelDefect::NotAStar(label));
        }
    }
    for i in 0..3 {
        for j in 0..t as u32 {
            let (a, b) = (BranchLabel::Left(i), BranchLabel::Right(j));
            let touching = model.branch_sets[&a]
                .iter()
                .any(|&x| g.neighbors(x).iter().any(|y| model.branch_sets[&b].contains(y)));
            if !touching {
                return Err(ModelDefect::MissingEdge(a, b));
            }
        }
    }
    Ok(())
}

/// Finds a depth-1 minor model of `K_{3,t}` with the default vertex cap.
pub fn find_k3t_depth1_minor(g: &Graph, t: usize) -> Result<Option<MinorModel>> {
    find_k3t_depth1_minor_with_cap(g, t, DEFAULT_MINOR_CAP)
}

/// Exhaustive search; graphs above `cap` vertices are refused rather than
/// answered heuristically.
pub fn find_k3t_depth1_minor_with_cap(g: &Graph, t: usize, cap: usize) -> Result<Option<MinorModel>> {
    if t < 3 {
        return Err(Error::InvalidParameter(alloc::format!(
            "K_{{3,t}} search needs t >= 3, got {t}"
        )));
    }
    let cap = cap.min(MASK_BITS);
    if g.n() > cap {
        return Err(Error::SearchRefused {
            what: "minor search graph",
            size: g.n(),
            cap,
        });
    }
    let idx = Indexed::new(g);
    Ok(Search::new(&idx, t, None).first())
}

/// A subgraph given by its vertex and edge sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
}

impl Subgraph {
    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        for &v in &self.vertices {
            g.add_vertex(v).expect("sorted unique vertices");
        }
        for e in &self.edges {
            g.add_edge(e.lo(), e.hi()).expect("edges between listed vertices");
        }
        g
    }
}

/// The `v`-canonical subgraph of `G[N^6[v]]`: start from the whole ball and
/// try deleting edges from the largest to the smallest, keeping a deletion
/// whenever a depth-1 `K_{3,3}` model with `v` on one of its witnessing
/// edges survives. The result is the edge set of such a model and no edge of
/// it can be dropped.
pub fn canonical_k33_subgraph(g: &Graph, v: VertexId) -> Result<Option<Subgraph>> {
    canonical_k33_subgraph_with_cap(g, v, DEFAULT_BALL_CAP)
}

pub fn canonical_k33_subgraph_with_cap(g: &Graph, v: VertexId, ball_cap: usize) -> Result<Option<Subgraph>> {
    let ball = g.ball(v, CANONICAL_RADIUS)?;
    let cap = ball_cap.min(MASK_BITS);
    if ball.len() > cap {
        return Err(Error::SearchRefused {
            what: "radius-6 ball",
            size: ball.len(),
            cap,
        });
    }
    let h = g.induced(&ball);
    let ids: Vec<VertexId> = h.vertices().collect();
    let root = ids.binary_search(&v).unwrap();
    let mut edges: Vec<(usize, usize)> = h
        .edges()
        .map(|e| (ids.binary_search(&e.lo()).unwrap(), ids.binary_search(&e.hi()).unwrap()))
        .collect();
    let anchored = |edges: &[(usize, usize)]| {
        let idx = Indexed::from_edges(ids.clone(), edges);
        Search::new(&idx, 3, Some(root)).first().is_some()
    };
    if !anchored(&edges) {
        return Ok(None);
    }
    for i in (0..edges.len()).rev() {
        let e = edges.remove(i);
        if !anchored(&edges) {
            edges.insert(i, e);
        }
    }
    let mut vertices: Vec<VertexId> = edges.iter().flat_map(|&(a, b)| [ids[a], ids[b]]).collect();
    vertices.sort();
    vertices.dedup();
    Ok(Some(Subgraph {
        vertices,
        edges: edges.iter().map(|&(a, b)| Edge::new(ids[a], ids[b])).collect(),
    }))
}

/// `⌈(m−2)(n−2)/4⌉` orientable, `⌈(m−2)(n−2)/2⌉` non-orientable.
pub fn genus_complete_bipartite(m: u64, n: u64, orientable: bool) -> u64 {
    assert!(m >= 2 && n >= 2, "genus formula needs m, n >= 2");
    let p = (m - 2) * (n - 2);
    if orientable {
        p.div_ceil(4)
    } else {
        p.div_ceil(2)
    }
}

/// `t` with `K_{3,t}` excluded as a minor from every graph of the given
/// genus: `4g + 3` orientable, `2g + 3` non-orientable.
pub fn excluded_k3t_for_genus(genus: u32, orientable: bool) -> u32 {
    if orientable {
        4 * genus + 3
    } else {
        2 * genus + 3
    }
}

/// Graph re-indexed to `0..n` in id order with bitset adjacency.
struct Indexed {
    ids: Vec<VertexId>,
    adj: Vec<u128>,
    /// Vertices at distance 1..=3.
    near3: Vec<u128>,
    full: u128,
}

impl Indexed {
    fn new(g: &Graph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let pos = |v: VertexId| ids.binary_search(&v).unwrap();
        let adj = ids
            .iter()
            .map(|&v| g.neighbors(v).iter().fold(0u128, |m, &u| m | 1 << pos(u)))
            .collect();
        Self::from_parts(ids, adj)
    }

    /// Vertices outside the 2-core never appear in a minimal model, so they
    /// are dropped here.
    fn from_parts(ids: Vec<VertexId>, mut adj: Vec<u128>) -> Self {
        let n = ids.len();
        let mut full = low_mask(n);
        loop {
            let weak = bits(full)
                .filter(|&i| (adj[i] & full).count_ones() < 2)
                .fold(0u128, |m, i| m | 1 << i);
            if weak == 0 {
                break;
            }
            full &= !weak;
        }
        for (i, a) in adj.iter_mut().enumerate() {
            *a = if full >> i & 1 == 1 { *a & full } else { 0 };
        }
        let near3 = (0..n)
            .map(|i| {
                let mut reach = 1u128 << i;
                for _ in 0..3 {
                    let mut next = reach;
                    let mut bits = reach;
                    while bits != 0 {
                        let j = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        next |= adj[j];
                    }
                    reach = next;
                }
                reach & !(1u128 << i)
            })
            .collect();
        Indexed {
            ids,
            adj,
            near3,
            full,
        }
    }

    fn from_edges(ids: Vec<VertexId>, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![0u128; ids.len()];
        for &(a, b) in edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Self::from_parts(ids, adj)
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// Backtracking over `K_{3,t}` models, stopping at the first. Branch sets
/// `0..3` are the left side, `3..3+t` the right side.
struct Search<'a> {
    g: &'a Indexed,
    t: usize,
    /// Vertex that must be an endpoint of a chosen cross edge.
    anchor: Option<usize>,
    /// Branch set holding the anchor once centers are fixed.
    anchor_set: usize,
    anchor_hits: u32,
    centers: Vec<usize>,
    members: Vec<u128>,
    used: u128,
    cross: Vec<(usize, usize)>,
    done: Vec<bool>,
    pairs: Vec<(usize, usize)>,
}

/// New leaves `(branch set, vertex)` plus the cross edge they enable.
struct Witness {
    leaves: [Option<(usize, usize)>; 2],
    edge: (usize, usize),
}

impl<'a> Search<'a> {
    fn new(g: &'a Indexed, t: usize, anchor: Option<usize>) -> Self {
        let pairs: Vec<_> = (0..3)
            .flat_map(|a| (3..3 + t).map(move |b| (a, b)))
            .collect();
        Search {
            g,
            t,
            anchor,
            anchor_set: usize::MAX,
            anchor_hits: 0,
            centers: Vec::new(),
            members: Vec::new(),
            used: 0,
            cross: vec![(0, 0); pairs.len()],
            done: vec![false; pairs.len()],
            pairs,
        }
    }

    fn first(&mut self) -> Option<MinorModel> {
        if (self.g.full.count_ones() as usize) < 3 + self.t {
            return None;
        }
        if let Some(v) = self.anchor {
            if self.g.full >> v & 1 == 0 {
                return None;
            }
        }
        // K_{3,t} contains K_{3,3}, which is not a minor of any planar graph.
        let lists: Vec<Vec<usize>> = self.g.adj.iter().map(|&a| bits(a).collect()).collect();
        if crate::planarity::is_planar_adjacency(&lists) {
            return None;
        }
        self.choose_center().then(|| self.model())
    }

    fn choose_center(&mut self) -> bool {
        let k = self.centers.len();
        if k == 3 + self.t {
            return self.place_anchor();
        }
        let mut candidates = self.g.full & !self.used;
        if k > 0 && k != 3 {
            // Same side: increasing centers.
            candidates &= !low_mask(self.centers[k - 1] + 1);
        }
        if k == 3 && self.t == 3 {
            // Sides are interchangeable for K_{3,3}: the smallest center is left.
            candidates &= !low_mask(self.centers[0] + 1);
        }
        if k >= 3 {
            for &l in &self.centers[..3] {
                candidates &= self.g.near3[l];
            }
        } else {
            // Two left centers share a right center within distance 3 of both.
            for &l in &self.centers {
                let mut reach6 = 0u128;
                for m in bits(self.g.near3[l]) {
                    reach6 |= self.g.near3[m];
                }
                candidates &= reach6;
            }
        }
        for c in bits(candidates) {
            self.centers.push(c);
            self.members.push(1 << c);
            self.used |= 1 << c;
            let found = self.choose_center();
            if found {
                return true;
            }
            self.used &= !(1 << c);
            self.members.pop();
            self.centers.pop();
        }
        false
    }

    /// The anchor is either a center or a leaf of an adjacent center.
    fn place_anchor(&mut self) -> bool {
        let Some(v) = self.anchor else {
            return self.connect();
        };
        if let Some(i) = self.centers.iter().position(|&c| c == v) {
            self.anchor_set = i;
            return self.connect();
        }
        for i in 0..self.centers.len() {
            if self.g.adj[self.centers[i]] >> v & 1 == 1 {
                self.anchor_set = i;
                self.members[i] |= 1 << v;
                self.used |= 1 << v;
                if self.connect() {
                    return true;
                }
                self.members[i] &= !(1 << v);
                self.used &= !(1 << v);
            }
        }
        false
    }

    fn anchor_pending(&self) -> bool {
        self.anchor.is_some() && self.anchor_hits == 0
    }

    fn touches_anchor(&self, (a, b): (usize, usize)) -> bool {
        a == self.anchor_set || b == self.anchor_set
    }

    /// Realizes the remaining pairs: pairs already witnessed by an edge
    /// between current members are closed without branching, otherwise the
    /// pair with the fewest options is branched on.
    fn connect(&mut self) -> bool {
        let open: Vec<usize> = (0..self.pairs.len()).filter(|&i| !self.done[i]).collect();
        if open.is_empty() {
            return !self.anchor_pending();
        }
        if self.anchor_pending() && !open.iter().any(|&i| self.touches_anchor(self.pairs[i])) {
            return false;
        }
        let pending = self.anchor_pending();
        let mut best: Option<(usize, Vec<Witness>)> = None;
        for &i in &open {
            let pair = self.pairs[i];
            if pending && self.touches_anchor(pair) {
                let v = self.anchor.unwrap();
                let (a, b) = pair;
                let other = if a == self.anchor_set { self.members[b] } else { self.members[a] };
                if let Some(y) = bits(self.g.adj[v] & other).next() {
                    let e = if a == self.anchor_set { (v, y) } else { (y, v) };
                    // Any completion works with this edge in place of another.
                    return self.apply(i, &Witness { leaves: [None, None], edge: e });
                }
            } else if let Some(e) = self.existing_edge(pair) {
                // Any completion using new leaves could use this edge instead.
                return self.apply(i, &Witness { leaves: [None, None], edge: e });
            }
            let options = self.options(pair, pending && self.touches_anchor(pair));
            if options.is_empty() {
                return false;
            }
            if best.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
                best = Some((i, options));
            }
        }
        let (i, options) = best.expect("open pairs remain");
        options.iter().any(|o| self.apply(i, o))
    }

    fn existing_edge(&self, (a, b): (usize, usize)) -> Option<(usize, usize)> {
        let mb = self.members[b];
        bits(self.members[a]).find_map(|x| bits(self.g.adj[x] & mb).next().map(|y| (x, y)))
    }

    /// Ways to witness a pair: existing edges (only listed while the anchor
    /// still needs a witness), then one or two new leaves.
    fn options(&self, (a, b): (usize, usize), with_existing: bool) -> Vec<Witness> {
        let mut out = Vec::new();
        let (ma, mb) = (self.members[a], self.members[b]);
        if with_existing {
            for x in bits(ma) {
                for y in bits(self.g.adj[x] & mb) {
                    out.push(Witness { leaves: [None, None], edge: (x, y) });
                }
            }
        }
        let free = self.g.full & !self.used;
        let (ca, cb) = (self.centers[a], self.centers[b]);
        for x in bits(self.g.adj[ca] & free) {
            for y in bits(self.g.adj[x] & mb) {
                out.push(Witness { leaves: [Some((a, x)), None], edge: (x, y) });
            }
        }
        for y in bits(self.g.adj[cb] & free) {
            for x in bits(self.g.adj[y] & ma) {
                out.push(Witness { leaves: [Some((b, y)), None], edge: (x, y) });
            }
        }
        for x in bits(self.g.adj[ca] & free) {
            for y in bits(self.g.adj[cb] & free & self.g.adj[x]) {
                out.push(Witness { leaves: [Some((a, x)), Some((b, y))], edge: (x, y) });
            }
        }
        out
    }

    fn apply(&mut self, pair: usize, o: &Witness) -> bool {
        for &(set, x) in o.leaves.iter().flatten() {
            self.members[set] |= 1 << x;
            self.used |= 1 << x;
        }
        let (x, y) = o.edge;
        let hit = self.anchor.is_some_and(|v| x == v || y == v) as u32;
        self.anchor_hits += hit;
        self.cross[pair] = o.edge;
        self.done[pair] = true;
        if self.connect() {
            return true;
        }
        self.done[pair] = false;
        self.anchor_hits -= hit;
        for &(set, x) in o.leaves.iter().flatten() {
            self.members[set] &= !(1 << x);
            self.used &= !(1 << x);
        }
        false
    }

    fn model(&self) -> MinorModel {
        let branch_sets = self
            .members
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let label = if i < 3 {
                    BranchLabel::Left(i as u32)
                } else {
                    BranchLabel::Right((i - 3) as u32)
                };
                (label, bits(m).map(|j| self.g.ids[j]).collect())
            })
            .collect();
        MinorModel { branch_sets }
    }
}

fn low_mask(k: usize) -> u128 {
    if k >= 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}
