//! Shared corpus and independent oracles for integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use localmds_core::generators::{self, Generated};
use localmds_core::{Graph, Rational, VertexId, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every generator family, at most 200 vertices each.
pub fn corpus() -> Vec<Generated> {
    let mut out = Vec::new();
    for w in 2..=14 {
        for h in w..=14 {
            if w * h <= 200 {
                out.push(generators::grid(w, h).unwrap());
            }
        }
    }
    for w in 3..=8 {
        for h in w..=8 {
            out.push(generators::torus_grid(w, h).unwrap());
        }
    }
    for n in [6, 8, 10, 12, 14, 16, 18, 20, 22, 24] {
        for seed in 0..6 {
            out.push(generators::random_planar(n, seed).unwrap());
        }
    }
    for n in [30, 40, 60, 80, 100, 150, 200] {
        for seed in 0..3 {
            out.push(generators::random_planar(n, seed).unwrap());
        }
    }
    for n in [10, 12, 14, 16, 18, 20, 22, 24] {
        for seed in 0..4 {
            out.push(generators::random_planar_sparse(n, seed, 40).unwrap());
        }
    }
    for n in [50, 100, 200] {
        for seed in 0..2 {
            out.push(generators::random_planar_sparse(n, seed, 40).unwrap());
        }
    }
    for n in [5, 10, 15, 20, 50, 100, 200] {
        for seed in 0..3 {
            out.push(generators::random_tree(n, seed).unwrap());
        }
    }
    for n in (2..=15).chain([50, 200]) {
        out.push(generators::path(n).unwrap());
    }
    for n in (3..=15).chain([100]) {
        out.push(generators::cycle(n).unwrap());
    }
    for leaves in (1..=10).chain([50]) {
        out.push(generators::star(leaves).unwrap());
    }
    for (m, n) in [(1, 5), (2, 4), (3, 3), (3, 4), (3, 5), (3, 6), (3, 7), (3, 8), (4, 4), (4, 5)] {
        out.push(generators::complete_bipartite(m, n).unwrap());
    }
    for (n, s) in [(5, 0), (5, 1), (5, 2), (6, 0), (6, 1), (7, 0)] {
        out.push(generators::subdivided_clique(n, s).unwrap());
    }
    out
}

/// Edge weights `p/q` with `p ∈ 1..=9`, `q ∈ 1..=4`.
pub fn with_random_weights(g: &Graph, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = g.clone();
    let edges: Vec<_> = g.edges().collect();
    for e in edges {
        let w = Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=4));
        h.set_edge_weight(e.lo(), e.hi(), w).unwrap();
    }
    h
}

/// γ by trying every subset in order of size.
pub fn gamma_exhaustive(g: &Graph) -> usize {
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    assert!(n <= 20, "exhaustive oracle is for tiny graphs");
    let closed: Vec<u32> = ids
        .iter()
        .map(|&v| {
            g.closed_neighbors(v)
                .map(|u| 1u32 << ids.binary_search(&u).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    (0..=n)
        .find(|&k| {
            (0u32..=full).filter(|s| s.count_ones() as usize == k).any(|s| {
                (0..n).filter(|i| s >> i & 1 == 1).fold(0, |a, i| a | closed[i]) == full
            })
        })
        .unwrap()
}

/// BFS distances inside `g`.
pub fn bfs(g: &Graph, from: VertexId) -> BTreeMap<VertexId, usize> {
    let mut dist = BTreeMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for &u in g.neighbors(v) {
            if !dist.contains_key(&u) {
                dist.insert(u, d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

pub fn ball(g: &Graph, v: VertexId, r: usize) -> VertexSet {
    bfs(g, v).into_iter().filter(|&(_, d)| d <= r).map(|(u, _)| u).collect()
}

/// Radius of `g[set]`, or `None` when it is disconnected.
pub fn induced_radius(g: &Graph, set: &VertexSet) -> Option<usize> {
    let h = g.induced(set);
    set.iter()
        .map(|&c| {
            let d = bfs(&h, c);
            (d.len() == set.len()).then(|| d.values().copied().max().unwrap_or(0))
        })
        .collect::<Option<Vec<usize>>>()
        .map(|r| r.into_iter().min().unwrap_or(0))
}

pub fn dominates(g: &Graph, s: &BTreeSet<VertexId>) -> bool {
    g.vertices().all(|v| g.closed_neighbors(v).any(|u| s.contains(&u)))
}

/// Sum of weights of edges between different parts.
pub fn crossing(g: &Graph, parts: &[VertexSet]) -> Rational {
    let owner: BTreeMap<VertexId, usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.iter().map(move |&v| (v, i)))
        .collect();
    g.edges()
        .filter(|e| owner[&e.lo()] != owner[&e.hi()])
        .map(|e| g.edge_weight(e.lo(), e.hi()))
        .sum()
}
