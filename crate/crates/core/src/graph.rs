//! Simple undirected graphs with optional exact rational weights.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result, StarDefect};

/// Vertex identifier. The natural integer order is the identifier order used
/// by every tie-break in the crate.
pub type VertexId = u32;

/// Exact weights and densities.
pub type Rational = Ratio<i64>;

pub type VertexSet = BTreeSet<VertexId>;

/// An undirected edge stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> VertexId {
        self.0
    }

    pub fn hi(self) -> VertexId {
        self.1
    }

    pub fn other(self, v: VertexId) -> VertexId {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }
}

/// Finite, undirected, simple graph.
///
/// Vertex weights and edge weights default to 1; only non-unit weights are
/// stored, so two graphs compare equal exactly when they agree on every
/// observable weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, VertexSet>,
    vertex_weight: BTreeMap<VertexId, Rational>,
    edge_weight: BTreeMap<Edge, Rational>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices `0..n` without edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n as VertexId {
            g.adj.insert(v, VertexSet::new());
        }
        g
    }

    /// Graph on `0..n` with the given edges.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<()> {
        if self.adj.contains_key(&v) {
            return Err(Error::DuplicateVertex(v));
        }
        self.adj.insert(v, VertexSet::new());
        Ok(())
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.has_edge(u, v) {
            return Err(Error::ParallelEdge(u.min(v), u.max(v)));
        }
        self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if !self.has_edge(u, v) {
            return Err(Error::UnknownEdge(u, v));
        }
        self.adj.get_mut(&u).unwrap().remove(&v);
        self.adj.get_mut(&v).unwrap().remove(&u);
        self.edge_weight.remove(&Edge::new(u, v));
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        let nbrs = self.adj.remove(&v).ok_or(Error::UnknownVertex(v))?;
        for u in nbrs {
            self.adj.get_mut(&u).unwrap().remove(&v);
            self.edge_weight.remove(&Edge::new(u, v));
        }
        self.vertex_weight.remove(&v);
        Ok(())
    }

    pub fn set_vertex_weight(&mut self, v: VertexId, w: Rational) -> Result<()> {
        self.check_vertex(v)?;
        if w <= Rational::zero() {
            return Err(Error::NonPositiveWeight);
        }
        if w.is_one() {
            self.vertex_weight.remove(&v);
        } else {
            self.vertex_weight.insert(v, w);
        }
        Ok(())
    }

    pub fn set_edge_weight(&mut self, u: VertexId, v: VertexId, w: Rational) -> Result<()> {
        if !self.has_edge(u, v) {
            return Err(Error::UnknownEdge(u, v));
        }
        if w <= Rational::zero() {
            return Err(Error::NonPositiveWeight);
        }
        if w.is_one() {
            self.edge_weight.remove(&Edge::new(u, v));
        } else {
            self.edge_weight.insert(Edge::new(u, v), w);
        }
        Ok(())
    }

    /// Drops every stored weight, making the graph unit-weighted.
    pub fn clear_weights(&mut self) {
        self.vertex_weight.clear();
        self.edge_weight.clear();
    }

    pub fn vertex_weight(&self, v: VertexId) -> Rational {
        self.vertex_weight
            .get(&v)
            .copied()
            .unwrap_or_else(Rational::one)
    }

    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Rational {
        self.edge_weight
            .get(&Edge::new(u, v))
            .copied()
            .unwrap_or_else(Rational::one)
    }

    /// Non-unit vertex weights in vertex order.
    pub fn explicit_vertex_weights(&self) -> impl Iterator<Item = (VertexId, Rational)> + '_ {
        self.vertex_weight.iter().map(|(&v, &w)| (v, w))
    }

    /// Non-unit edge weights in edge order.
    pub fn explicit_edge_weights(&self) -> impl Iterator<Item = (Edge, Rational)> + '_ {
        self.edge_weight.iter().map(|(&e, &w)| (e, w))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + Clone + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    /// Edges in lexicographic order of `(lo, hi)`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, n)| n.range(u + 1..).map(move |&v| Edge(u, v)))
    }

    /// Open neighborhood. Panics on an unknown vertex.
    pub fn neighbors(&self, v: VertexId) -> &VertexSet {
        &self.adj[&v]
    }

    pub fn closed_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        core::iter::once(v).chain(self.adj[&v].iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[&v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    pub fn total_edge_weight(&self) -> Rational {
        self.edges()
            .fold(Rational::zero(), |acc, e| acc + self.edge_weight(e.0, e.1))
    }

    pub fn total_vertex_weight(&self) -> Rational {
        self.vertices()
            .fold(Rational::zero(), |acc, v| acc + self.vertex_weight(v))
    }

    /// `N[S]`: the set together with all its neighbors.
    pub fn closed_neighborhood_of_set<'a>(
        &self,
        set: impl IntoIterator<Item = &'a VertexId>,
    ) -> VertexSet {
        let mut out = VertexSet::new();
        for &v in set {
            out.insert(v);
            out.extend(self.adj[&v].iter().copied());
        }
        out
    }

    /// `N^r[v]`, with `N^0[v] = {v}`.
    pub fn ball(&self, v: VertexId, r: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.distances_within(v, r).into_keys().collect())
    }

    /// BFS distances from `v`, truncated at `limit`.
    pub fn distances_within(&self, v: VertexId, limit: usize) -> BTreeMap<VertexId, usize> {
        let mut dist = BTreeMap::new();
        dist.insert(v, 0usize);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if d == limit {
                continue;
            }
            for &w in &self.adj[&u] {
                if !dist.contains_key(&w) {
                    dist.insert(w, d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distances(&self, v: VertexId) -> BTreeMap<VertexId, usize> {
        self.distances_within(v, usize::MAX)
    }

    /// Induced subgraph `G[S]`, keeping weights. Vertices of `S` outside the
    /// graph are ignored.
    pub fn induced(&self, set: &VertexSet) -> Graph {
        let mut g = Graph::new();
        for &v in set {
            if let Some(n) = self.adj.get(&v) {
                g.adj
                    .insert(v, n.iter().copied().filter(|u| set.contains(u)).collect());
                if let Some(&w) = self.vertex_weight.get(&v) {
                    g.vertex_weight.insert(v, w);
                }
            }
        }
        for (&e, &w) in &self.edge_weight {
            if set.contains(&e.0) && set.contains(&e.1) {
                g.edge_weight.insert(e, w);
            }
        }
        g
    }

    /// `G - S`.
    pub fn without(&self, removed: &VertexSet) -> Graph {
        let keep = self.vertices().filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// Connected components, each as a vertex set, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp: VertexSet = self.distances(v).into_keys().collect();
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Radius of a connected graph: the smallest eccentricity. `None` if the
    /// graph is empty or disconnected.
    pub fn radius(&self) -> Option<usize> {
        let n = self.n();
        self.vertices()
            .filter_map(|v| {
                let d = self.distances(v);
                (d.len() == n).then(|| d.values().copied().max().unwrap_or(0))
            })
            .min()
    }
}

/// `|E| / |V|` as an exact rational.
pub fn edge_density(g: &Graph) -> Result<Rational> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(Rational::new(g.m() as i64, g.n() as i64))
}

/// A radius-at-most-1 branch set: a center and leaves adjacent to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub center: VertexId,
    pub leaves: VertexSet,
}

impl Star {
    pub fn singleton(center: VertexId) -> Self {
        Star {
            center,
            leaves: VertexSet::new(),
        }
    }

    pub fn members(&self) -> impl Iterator<Item = VertexId> + '_ {
        core::iter::once(self.center).chain(self.leaves.iter().copied())
    }

    pub fn len(&self) -> usize {
        1 + self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A partition of `V(G)` into stars together with the contracted graph.
///
/// Quotient vertex `i` is star `i`. Quotient vertex weights are the sums of
/// member weights, quotient edge weights the sums of crossing edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarPartition {
    pub stars: Vec<Star>,
    pub quotient: Graph,
    owner: BTreeMap<VertexId, VertexId>,
}

impl StarPartition {
    /// Quotient vertex holding `v`.
    pub fn owner(&self, v: VertexId) -> Option<VertexId> {
        self.owner.get(&v).copied()
    }
}

/// Contracts vertex-disjoint stars covering `V(g)`.
pub fn contract_stars(g: &Graph, stars: &[Star]) -> Result<StarPartition> {
    let mut owner = BTreeMap::new();
    for (index, star) in stars.iter().enumerate() {
        let err = |defect| Error::InvalidStar {
            index,
            center: star.center,
            defect,
        };
        for v in star.members() {
            if !g.contains(v) {
                return Err(err(StarDefect::Unknown(v)));
            }
            if owner.insert(v, index as VertexId).is_some() {
                return Err(err(StarDefect::Overlap(v)));
            }
        }
        if let Some(&leaf) = star.leaves.iter().find(|&&l| !g.has_edge(star.center, l)) {
            return Err(err(StarDefect::LeafNotAdjacent(leaf)));
        }
    }
    if let Some(v) = g.vertices().find(|v| !owner.contains_key(v)) {
        return Err(Error::UncoveredVertex(v));
    }

    let mut quotient = Graph::with_vertices(stars.len());
    for (i, star) in stars.iter().enumerate() {
        let w = star
            .members()
            .fold(Rational::zero(), |acc, v| acc + g.vertex_weight(v));
        quotient.set_vertex_weight(i as VertexId, w)?;
    }
    let mut crossing: BTreeMap<Edge, Rational> = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (owner[&e.lo()], owner[&e.hi()]);
        if a != b {
            *crossing.entry(Edge::new(a, b)).or_insert_with(Rational::zero) +=
                g.edge_weight(e.lo(), e.hi());
        }
    }
    for (e, w) in crossing {
        quotient.add_edge(e.lo(), e.hi())?;
        quotient.set_edge_weight(e.lo(), e.hi(), w)?;
    }
    Ok(StarPartition {
        stars: stars.to_vec(),
        quotient,
        owner,
    })
}

/// A partition of the vertex set into connected clusters of bounded radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPartition {
    pub clusters: Vec<VertexSet>,
    /// Number of contraction rounds `i0` the radius bound was derived from.
    pub iterations: u32,
    /// `(3^i0 - 1) / 2`, saturated at `u64::MAX`.
    pub radius_bound: u64,
}

impl ClusterPartition {
    /// Checks that the clusters partition `V(g)` and that every cluster is
    /// connected with radius at most `radius_bound`. Returns the largest
    /// observed radius.
    pub fn validate(&self, g: &Graph) -> core::result::Result<usize, ClusterDefect> {
        let mut seen = VertexSet::new();
        let mut worst = 0;
        for (i, c) in self.clusters.iter().enumerate() {
            if c.is_empty() {
                return Err(ClusterDefect::Empty(i));
            }
            for &v in c {
                if !g.contains(v) || !seen.insert(v) {
                    return Err(ClusterDefect::NotAPartition(v));
                }
            }
            let r = g.induced(c).radius().ok_or(ClusterDefect::Disconnected(i))?;
            if r as u64 > self.radius_bound {
                return Err(ClusterDefect::RadiusTooLarge { cluster: i, radius: r });
            }
            worst = worst.max(r);
        }
        if let Some(v) = g.vertices().find(|v| !seen.contains(v)) {
            return Err(ClusterDefect::NotAPartition(v));
        }
        Ok(worst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterDefect {
    Empty(usize),
    NotAPartition(VertexId),
    Disconnected(usize),
    RadiusTooLarge { cluster: usize, radius: usize },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn ball_radius_zero_and_one() {
        let g = path3();
        assert_eq!(g.ball(0, 0).unwrap(), VertexSet::from([0]));
        assert_eq!(g.ball(0, 1).unwrap(), VertexSet::from([0, 1]));
        assert_eq!(g.ball(7, 1), Err(Error::UnknownVertex(7)));
    }

    #[test]
    fn ball_in_grid_matches_manhattan_count() {
        let g = generators::grid(6, 6).unwrap().graph;
        // center vertex (2,2) of a 6x6 grid: every cell with |dx|+|dy| <= 2
        let center = 2 * 6 + 2;
        let expected = (0..6i32)
            .flat_map(|y| (0..6i32).map(move |x| (x, y)))
            .filter(|(x, y)| (x - 2).abs() + (y - 2).abs() <= 2)
            .count();
        assert_eq!(expected, 13);
        assert_eq!(g.ball(center, 2).unwrap().len(), 13);
    }

    #[test]
    fn rejects_loops_parallel_edges_and_bad_weights() {
        let mut g = path3();
        assert_eq!(g.add_edge(1, 1), Err(Error::SelfLoop(1)));
        assert_eq!(g.add_edge(1, 0), Err(Error::ParallelEdge(0, 1)));
        assert_eq!(g.add_edge(0, 9), Err(Error::UnknownVertex(9)));
        assert_eq!(
            g.set_edge_weight(0, 1, Rational::zero()),
            Err(Error::NonPositiveWeight)
        );
        assert_eq!(
            g.set_vertex_weight(0, Rational::from(-1)),
            Err(Error::NonPositiveWeight)
        );
    }

    #[test]
    fn unit_weights_are_not_stored() {
        let mut g = path3();
        g.set_edge_weight(0, 1, Rational::from(2)).unwrap();
        g.set_edge_weight(0, 1, Rational::one()).unwrap();
        assert_eq!(g, path3());
    }

    #[test]
    fn contract_triangle_into_edge() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let stars = [
            Star {
                center: 0,
                leaves: VertexSet::from([1]),
            },
            Star::singleton(2),
        ];
        let p = contract_stars(&g, &stars).unwrap();
        assert_eq!(p.quotient.n(), 2);
        assert_eq!(p.quotient.m(), 1);
        assert_eq!(p.quotient.edge_weight(0, 1), Rational::from(2));
        assert_eq!(p.quotient.vertex_weight(0), Rational::from(2));
    }

    #[test]
    fn identity_contraction_reproduces_graph() {
        let mut g = generators::grid(3, 4).unwrap().graph;
        g.set_edge_weight(0, 1, Rational::new(7, 2)).unwrap();
        g.set_vertex_weight(5, Rational::from(3)).unwrap();
        let stars: Vec<Star> = g.vertices().map(Star::singleton).collect();
        assert_eq!(contract_stars(&g, &stars).unwrap().quotient, g);
    }

    #[test]
    fn contract_whole_star() {
        let g = generators::star(5).unwrap().graph;
        let stars = [Star {
            center: 0,
            leaves: (1..=5).collect(),
        }];
        let q = contract_stars(&g, &stars).unwrap().quotient;
        assert_eq!((q.n(), q.m()), (1, 0));
    }

    #[test]
    fn contract_reports_offending_star() {
        let g = path3();
        let overlap = [
            Star {
                center: 1,
                leaves: VertexSet::from([0]),
            },
            Star {
                center: 2,
                leaves: VertexSet::from([1]),
            },
        ];
        assert!(matches!(
            contract_stars(&g, &overlap),
            Err(Error::InvalidStar { index: 1, defect: StarDefect::Overlap(1), .. })
        ));
        let far = [Star {
            center: 0,
            leaves: VertexSet::from([1, 2]),
        }];
        assert!(matches!(
            contract_stars(&g, &far),
            Err(Error::InvalidStar { index: 0, defect: StarDefect::LeafNotAdjacent(2), .. })
        ));
        assert_eq!(
            contract_stars(&g, &[Star::singleton(0)]),
            Err(Error::UncoveredVertex(1))
        );
    }

    #[test]
    fn densities() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(edge_density(&k4).unwrap(), Rational::new(3, 2));
        let tree = generators::path(7).unwrap().graph;
        assert_eq!(edge_density(&tree).unwrap(), Rational::new(6, 7));
        let k33 = generators::complete_bipartite(3, 3).unwrap().graph;
        assert_eq!(edge_density(&k33).unwrap(), Rational::new(3, 2));
        assert_eq!(edge_density(&Graph::new()), Err(Error::EmptyGraph));
    }
}
