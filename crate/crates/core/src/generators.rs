//! Deterministic and seeded graph families with known class membership.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::minor;

/// Class metadata carried by every generated graph. All numbers are upper
/// bounds known from the construction; none is computed from the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub family: String,
    pub planar: bool,
    pub genus_upper_bound: u32,
    pub arboricity_upper_bound: u32,
    /// Bound `c` on the edge density of depth-1 minors.
    pub density_upper_bound: u32,
    /// `t` such that the graph excludes `K_{3,t}` as a depth-1 minor.
    pub k3t_exclusion: u32,
}

impl ClassInfo {
    fn planar(family: String, arboricity: u32, density: u32) -> Self {
        ClassInfo {
            family,
            planar: true,
            genus_upper_bound: 0,
            arboricity_upper_bound: arboricity,
            density_upper_bound: density,
            k3t_exclusion: 3,
        }
    }

    fn with_genus(family: String, genus: u32, arboricity: u32) -> Self {
        if genus == 0 {
            return Self::planar(family, arboricity, 3);
        }
        ClassInfo {
            family,
            planar: false,
            genus_upper_bound: genus,
            arboricity_upper_bound: arboricity,
            density_upper_bound: genus_density_bound(genus),
            k3t_exclusion: minor::excluded_k3t_for_genus(genus, true),
        }
    }

    /// `key=value` pairs in a fixed order, used by the metadata sidecar lines.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        alloc::vec![
            ("family", self.family.clone()),
            ("planar", format!("{}", self.planar)),
            ("genus", format!("{}", self.genus_upper_bound)),
            ("arboricity", format!("{}", self.arboricity_upper_bound)),
            ("density", format!("{}", self.density_upper_bound)),
            ("k3t", format!("{}", self.k3t_exclusion)),
        ]
    }
}

/// `⌈5·√g⌉` for `g ≥ 1`, and 3 for planar graphs.
pub fn genus_density_bound(genus: u32) -> u32 {
    if genus == 0 {
        return 3;
    }
    let target = 25 * genus as u64;
    let mut c = libm::sqrt(target as f64) as u64;
    while c * c < target {
        c += 1;
    }
    while c > 0 && (c - 1) * (c - 1) >= target {
        c -= 1;
    }
    c as u32
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub graph: Graph,
    pub info: ClassInfo,
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `w × h` grid, vertex `(x, y)` has id `y·w + x`.
pub fn grid(w: usize, h: usize) -> Result<Generated> {
    if w == 0 || h == 0 {
        return Err(invalid(format!("grid needs positive sides, got {w}x{h}")));
    }
    let mut g = Graph::with_vertices(w * h);
    let id = |x: usize, y: usize| (y * w + x) as VertexId;
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                g.add_edge(id(x, y), id(x + 1, y))?;
            }
            if y + 1 < h {
                g.add_edge(id(x, y), id(x, y + 1))?;
            }
        }
    }
    let arboricity = if w == 1 || h == 1 { 1 } else { 2 };
    Ok(Generated {
        graph: g,
        info: ClassInfo::planar(format!("grid-{w}x{h}"), arboricity, 3),
    })
}

/// Cartesian product `C_w × C_h`, embedded on the torus.
pub fn torus_grid(w: usize, h: usize) -> Result<Generated> {
    if w < 3 || h < 3 {
        return Err(invalid(format!("torus grid needs sides >= 3, got {w}x{h}")));
    }
    let mut g = Graph::with_vertices(w * h);
    let id = |x: usize, y: usize| (y * w + x) as VertexId;
    for y in 0..h {
        for x in 0..w {
            g.add_edge(id(x, y), id((x + 1) % w, y))?;
            g.add_edge(id(x, y), id(x, (y + 1) % h))?;
        }
    }
    Ok(Generated {
        graph: g,
        info: ClassInfo::with_genus(format!("torus-{w}x{h}"), 1, 3),
    })
}

/// `K_{m,n}`: left side `0..m`, right side `m..m+n`.
pub fn complete_bipartite(m: usize, n: usize) -> Result<Generated> {
    if m == 0 || n == 0 {
        return Err(invalid(format!("K_{{m,n}} needs positive sides, got {m},{n}")));
    }
    let mut g = Graph::with_vertices(m + n);
    for a in 0..m {
        for b in m..m + n {
            g.add_edge(a as VertexId, b as VertexId)?;
        }
    }
    let genus = if m >= 2 && n >= 2 {
        minor::genus_complete_bipartite(m as u64, n as u64, true) as u32
    } else {
        0
    };
    let arboricity = (m * n).div_ceil(m + n - 1) as u32;
    Ok(Generated {
        graph: g,
        info: ClassInfo::with_genus(format!("K{m},{n}"), genus, arboricity),
    })
}

/// `K_n` with every edge replaced by a path through `s` new vertices.
/// Branch vertices are `0..n`; path vertices follow in edge order.
pub fn subdivided_clique(n: usize, s: usize) -> Result<Generated> {
    if n == 0 {
        return Err(invalid("subdivided clique needs n >= 1".into()));
    }
    let pairs = n * (n - 1) / 2;
    let mut g = Graph::with_vertices(n + s * pairs);
    let mut next = n as VertexId;
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            let mut prev = a;
            for _ in 0..s {
                g.add_edge(prev, next)?;
                prev = next;
                next += 1;
            }
            g.add_edge(prev, b)?;
        }
    }
    // Ringel–Youngs.
    let genus = if n >= 3 {
        ((n - 3) * (n.saturating_sub(4))).div_ceil(12) as u32
    } else {
        0
    };
    let arboricity = if s == 0 { n.div_ceil(2).max(1) as u32 } else { 2 };
    let mut info = ClassInfo::with_genus(format!("subdivided-K{n}-s{s}"), genus, arboricity);
    if s >= 3 {
        // Two stars around distinct branch vertices can never touch across a
        // path with three inner vertices, so depth-1 minors keep every branch
        // vertex's set independent from the others: no K_{3,3}, density <= 2.
        info.k3t_exclusion = 3;
        info.density_upper_bound = 2;
    }
    Ok(Generated { graph: g, info })
}

/// Triangle-splitting triangulation: start from a triangle and repeatedly
/// insert a vertex into a seeded random face. Always maximal planar.
pub fn random_planar(n: usize, seed: u64) -> Result<Generated> {
    random_planar_sparse(n, seed, 0)
}

/// [`random_planar`] followed by deleting `drop_percent`% of the edges,
/// chosen by the same seed.
pub fn random_planar_sparse(n: usize, seed: u64, drop_percent: u32) -> Result<Generated> {
    if n < 3 {
        return Err(invalid(format!("random planar graph needs n >= 3, got {n}")));
    }
    if drop_percent > 100 {
        return Err(invalid(format!("drop percentage {drop_percent} above 100")));
    }
    let mut rng = rng(seed);
    let mut g = Graph::from_edges(n, &[(0, 1), (1, 2), (0, 2)])?;
    let mut faces: Vec<[VertexId; 3]> = alloc::vec![[0, 1, 2]];
    for v in 3..n as VertexId {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(i);
        g.add_edge(v, a)?;
        g.add_edge(v, b)?;
        g.add_edge(v, c)?;
        faces.push([a, b, v]);
        faces.push([b, c, v]);
        faces.push([a, c, v]);
    }
    if drop_percent > 0 {
        let mut edges: Vec<_> = g.edges().collect();
        edges.shuffle(&mut rng);
        let k = edges.len() * drop_percent as usize / 100;
        for e in &edges[..k] {
            g.remove_edge(e.lo(), e.hi())?;
        }
    }
    let family = if drop_percent == 0 {
        format!("random-planar-{n}-s{seed}")
    } else {
        format!("random-planar-{n}-s{seed}-d{drop_percent}")
    };
    Ok(Generated {
        graph: g,
        info: ClassInfo::planar(family, 3, 3),
    })
}

pub fn path(n: usize) -> Result<Generated> {
    if n == 0 {
        return Err(invalid("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n as VertexId).map(|v| (v - 1, v)).collect();
    Ok(Generated {
        graph: Graph::from_edges(n, &edges)?,
        info: ClassInfo::planar(format!("path-{n}"), 1, 1),
    })
}

pub fn cycle(n: usize) -> Result<Generated> {
    if n < 3 {
        return Err(invalid(format!("cycle needs n >= 3, got {n}")));
    }
    let mut edges: Vec<_> = (1..n as VertexId).map(|v| (v - 1, v)).collect();
    edges.push((0, n as VertexId - 1));
    Ok(Generated {
        graph: Graph::from_edges(n, &edges)?,
        info: ClassInfo::planar(format!("cycle-{n}"), 2, 1),
    })
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Result<Generated> {
    if leaves == 0 {
        return Err(invalid("star needs at least one leaf".into()));
    }
    let edges: Vec<_> = (1..=leaves as VertexId).map(|v| (0, v)).collect();
    Ok(Generated {
        graph: Graph::from_edges(leaves + 1, &edges)?,
        info: ClassInfo::planar(format!("star-{leaves}"), 1, 1),
    })
}

/// Each vertex `v ≥ 1` attaches to a uniformly random earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Result<Generated> {
    if n == 0 {
        return Err(invalid("tree needs n >= 1".into()));
    }
    let mut rng = rng(seed);
    let edges: Vec<_> = (1..n as VertexId)
        .map(|v| (rng.gen_range(0..v), v))
        .collect();
    Ok(Generated {
        graph: Graph::from_edges(n, &edges)?,
        info: ClassInfo::planar(format!("tree-{n}-s{seed}"), 1, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_2x2_is_c4() {
        let g = grid(2, 2).unwrap().graph;
        assert_eq!(g, Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
    }

    #[test]
    fn torus_3x3_counts_and_euler_bound() {
        let t = torus_grid(3, 3).unwrap();
        assert_eq!((t.graph.n(), t.graph.m()), (9, 18));
        let g = t.info.genus_upper_bound as usize;
        assert!(t.graph.m() <= 3 * t.graph.n() + 6 * g - 6);
        assert_eq!(t.info.k3t_exclusion, 7);
        assert_eq!(t.info.density_upper_bound, 5);
    }

    #[test]
    fn subdivided_k5_counts() {
        let g = subdivided_clique(5, 3).unwrap().graph;
        assert_eq!((g.n(), g.m()), (35, 40));
        assert!(g.is_connected());
    }

    #[test]
    fn planar_outputs_respect_euler_bound() {
        for seed in 0..20 {
            for n in [3, 4, 10, 40] {
                let g = random_planar(n, seed).unwrap().graph;
                assert_eq!(g.m(), 3 * n - 6);
                let sparse = random_planar_sparse(n, seed, 30).unwrap().graph;
                assert!(sparse.m() <= 3 * n - 6);
            }
        }
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        assert_eq!(random_planar(30, 7), random_planar(30, 7));
        assert_eq!(random_tree(30, 7), random_tree(30, 7));
        assert_ne!(random_planar(30, 7).unwrap().graph, random_planar(30, 8).unwrap().graph);
    }

    #[test]
    fn invalid_sizes() {
        assert!(torus_grid(2, 5).is_err());
        assert!(grid(0, 3).is_err());
        assert!(cycle(2).is_err());
        assert!(random_planar(2, 0).is_err());
    }

    #[test]
    fn genus_density() {
        assert_eq!(genus_density_bound(0), 3);
        assert_eq!(genus_density_bound(1), 5);
        assert_eq!(genus_density_bound(2), 8);
        assert_eq!(genus_density_bound(4), 10);
    }
}
