//! Maximum subgraph density `max_{H ⊆ G} |E(H)| / |V(H)|`.
//!
//! Exact for graphs up to a vertex cap via parametric min-cut over the finite
//! set of candidate ratios; above the cap the peeling degeneracy is returned
//! as an upper bound (the true value lies within a factor 2 below it).

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Rational, VertexId};

pub const DEFAULT_EXACT_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityBound {
    pub value: Rational,
    /// `false` when `value` is the peeling degeneracy, an upper bound.
    pub exact: bool,
}

pub fn degeneracy_bound(g: &Graph) -> Result<DensityBound> {
    degeneracy_bound_with_cap(g, DEFAULT_EXACT_CAP)
}

pub fn degeneracy_bound_with_cap(g: &Graph, cap: usize) -> Result<DensityBound> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if g.n() > cap {
        return Ok(DensityBound {
            value: Rational::from(peeling_degeneracy(g) as i64),
            exact: false,
        });
    }
    Ok(DensityBound {
        value: max_density_exact(g),
        exact: true,
    })
}

/// Largest `k` such that some subgraph has minimum degree `k`.
pub fn peeling_degeneracy(g: &Graph) -> usize {
    let mut deg: BTreeMap<VertexId, usize> = g.vertices().map(|v| (v, g.degree(v))).collect();
    let mut best = 0;
    while let Some((&v, &d)) = deg.iter().min_by_key(|(&v, &d)| (d, v)) {
        best = best.max(d);
        deg.remove(&v);
        for u in g.neighbors(v) {
            if let Some(du) = deg.get_mut(u) {
                *du -= 1;
            }
        }
    }
    best
}

fn max_density_exact(g: &Graph) -> Rational {
    let n = g.n() as i64;
    let m = g.m() as i64;
    let mut candidates: Vec<Rational> = Vec::new();
    for v in 1..=n {
        for e in 0..=m.min(v * (v - 1) / 2) {
            candidates.push(Rational::new(e, v));
        }
    }
    candidates.sort();
    candidates.dedup();
    // Smallest candidate x for which no subgraph has density strictly above x.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if denser_than(g, candidates[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    candidates[lo]
}

/// Whether some subgraph `H` has `|E(H)| / |V(H)| > x`.
///
/// With `x = p/q` this is `max_S (q |E(S)| - p |S|) > 0`, a maximum-weight
/// closure problem: source -> edge node (cap q), edge node -> endpoints
/// (infinite), vertex -> sink (cap p).
fn denser_than(g: &Graph, x: Rational) -> bool {
    let (p, q) = (*x.numer(), *x.denom());
    let index: BTreeMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let n = g.n();
    let edges: Vec<_> = g.edges().collect();
    let source = n + edges.len();
    let sink = source + 1;
    let mut net = FlowNetwork::new(sink + 1);
    let inf = q * edges.len() as i64 + 1;
    for (i, e) in edges.iter().enumerate() {
        let node = n + i;
        net.add_arc(source, node, q);
        net.add_arc(node, index[&e.lo()], inf);
        net.add_arc(node, index[&e.hi()], inf);
    }
    for i in 0..n {
        net.add_arc(i, sink, p);
    }
    let cut = net.max_flow(source, sink);
    q * edges.len() as i64 - cut > 0
}

struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_arc(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    // Dinic.
    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut level = vec![usize::MAX; self.head.len()];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.head[u] {
                    if self.cap[a] > 0 && level[self.to[a]] == usize::MAX {
                        level[self.to[a]] = level[u] + 1;
                        queue.push_back(self.to[a]);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; self.head.len()];
            loop {
                let f = self.augment(s, t, i64::MAX, &level, &mut next);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: i64, level: &[usize], next: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while next[u] < self.head[u].len() {
            let a = self.head[u][next[u]];
            let v = self.to[a];
            if self.cap[a] > 0 && level[v] == level[u] + 1 {
                let f = self.augment(v, t, limit.min(self.cap[a]), level, next);
                if f > 0 {
                    self.cap[a] -= f;
                    self.cap[a ^ 1] += f;
                    return f;
                }
            }
            next[u] += 1;
        }
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::VertexSet;

    /// Brute force over vertex subsets; induced subgraphs dominate all others.
    fn brute_force(g: &Graph) -> Rational {
        let vs: Vec<_> = g.vertices().collect();
        let mut best = Rational::from(0);
        for mask in 1u32..(1 << vs.len()) {
            let set: VertexSet = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let h = g.induced(&set);
            best = best.max(Rational::new(h.m() as i64, h.n() as i64));
        }
        best
    }

    #[test]
    fn matches_enumeration_on_small_graphs() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let p5 = generators::path(5).unwrap().graph;
        let k33 = generators::complete_bipartite(3, 3).unwrap().graph;
        assert_eq!(brute_force(&p5), Rational::new(4, 5));
        assert_eq!(brute_force(&k33), Rational::new(3, 2));
        for (g, want) in [
            (k4, Rational::new(3, 2)),
            (p5, Rational::new(4, 5)),
            (k33, Rational::new(3, 2)),
        ] {
            let b = degeneracy_bound(&g).unwrap();
            assert!(b.exact);
            assert_eq!(b.value, want);
        }
    }

    #[test]
    fn dense_core_plus_tail() {
        // K5 with a pendant path: the clique is the densest part.
        let mut g = Graph::with_vertices(8);
        for u in 0..5 {
            for v in u + 1..5 {
                g.add_edge(u, v).unwrap();
            }
        }
        g.add_edge(4, 5).unwrap();
        g.add_edge(5, 6).unwrap();
        g.add_edge(6, 7).unwrap();
        assert_eq!(degeneracy_bound(&g).unwrap().value, brute_force(&g));
        assert_eq!(brute_force(&g), Rational::from(2));
    }

    #[test]
    fn random_planar_agrees_with_enumeration() {
        for seed in 0..4 {
            let g = generators::random_planar(11, seed).unwrap().graph;
            assert_eq!(degeneracy_bound(&g).unwrap().value, brute_force(&g));
        }
    }

    #[test]
    fn above_cap_is_flagged_upper_bound() {
        let g = generators::grid(9, 9).unwrap().graph;
        let b = degeneracy_bound(&g).unwrap();
        assert!(!b.exact);
        assert_eq!(b.value, Rational::from(2));
        let exact = degeneracy_bound_with_cap(&g, 100).unwrap().value;
        assert!(exact <= b.value && b.value <= exact * 2);
    }

    #[test]
    fn empty_graph_is_an_error() {
        assert_eq!(degeneracy_bound(&Graph::new()), Err(Error::EmptyGraph));
    }
}
