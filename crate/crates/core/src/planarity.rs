//! Planarity testing by path addition (Demoucron, Malgrange, Pertuiset),
//! run separately on every biconnected block. Quadratic, which is plenty for
//! the neighborhoods it is used on.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

#[cfg(test)]
use crate::graph::{Graph, VertexId};

/// Whether `g` has an embedding in the plane.
#[cfg(test)]
fn is_planar(g: &Graph) -> bool {
    let ids: Vec<VertexId> = g.vertices().collect();
    let pos = |v: VertexId| ids.binary_search(&v).unwrap();
    let adj: Vec<Vec<usize>> = ids
        .iter()
        .map(|&v| g.neighbors(v).iter().map(|&u| pos(u)).collect())
        .collect();
    is_planar_adjacency(&adj)
}

/// Same test on adjacency lists over `0..n`.
pub(crate) fn is_planar_adjacency(adj: &[Vec<usize>]) -> bool {
    let n = adj.iter().filter(|a| !a.is_empty()).count();
    let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if n >= 3 && m > 3 * n - 6 {
        return false;
    }
    blocks(adj).iter().all(|edges| block_is_planar(edges))
}

/// Edge sets of the biconnected components.
fn blocks(adj: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // Frames: (vertex, parent, next neighbor index).
        let mut frames = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut next)) = frames.last_mut() {
            if *next < adj[v].len() {
                let u = adj[v][*next];
                *next += 1;
                if disc[u] == usize::MAX {
                    stack.push((v, u));
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    frames.push((u, v, 0));
                } else if u != parent && disc[u] < disc[v] {
                    stack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
                continue;
            }
            frames.pop();
            if parent != usize::MAX {
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    let mut block = Vec::new();
                    while let Some(e) = stack.pop() {
                        block.push(e);
                        if e == (parent, v) {
                            break;
                        }
                    }
                    out.push(block);
                }
            }
        }
    }
    out
}

fn block_is_planar(edges: &[(usize, usize)]) -> bool {
    let vertices: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    if vertices.len() < 5 {
        return true;
    }
    let n = *vertices.last().unwrap() + 1;
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut embedded_vertex = vec![false; n];
    let mut embedded_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let cycle = find_cycle(&adj, *vertices.first().unwrap());
    for (i, &v) in cycle.iter().enumerate() {
        embedded_vertex[v] = true;
        let w = cycle[(i + 1) % cycle.len()];
        embedded_edges.insert(key(v, w));
    }
    let mut faces = vec![cycle.clone(), cycle];
    loop {
        let fragments = fragments(&adj, &vertices, &embedded_vertex, &embedded_edges);
        if fragments.is_empty() {
            return true;
        }
        let mut choice = None;
        for frag in &fragments {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|a| faces[f].contains(a)))
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((frag, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((frag, admissible[0]));
                    }
                }
            }
        }
        let (frag, f) = choice.unwrap();
        let path = fragment_path(&adj, frag, &embedded_vertex);
        for w in path.windows(2) {
            embedded_edges.insert(key(w[0], w[1]));
        }
        for &v in &path {
            embedded_vertex[v] = true;
        }
        let (a, b) = split_face(&faces[f], &path);
        faces[f] = a;
        faces.push(b);
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// A cycle through the edge `start`–`adj[start][0]`: the edge plus a
/// shortest path avoiding it, which exists inside a block.
fn find_cycle(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let target = adj[start][0];
    let mut parent = vec![usize::MAX; adj.len()];
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if v == start && u == target {
                continue;
            }
            if parent[u] == usize::MAX {
                parent[u] = v;
                if u == target {
                    let mut cycle = vec![u];
                    let mut x = u;
                    while x != start {
                        x = parent[x];
                        cycle.push(x);
                    }
                    return cycle;
                }
                queue.push_back(u);
            }
        }
    }
    unreachable!("blocks with at least three vertices are 2-connected")
}

struct Fragment {
    /// Unembedded vertices; empty for a single chord.
    inner: Vec<usize>,
    /// For a chord, its two endpoints.
    attachments: BTreeSet<usize>,
}

fn fragments(
    adj: &[Vec<usize>],
    vertices: &BTreeSet<usize>,
    embedded_vertex: &[bool],
    embedded_edges: &BTreeSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &v in vertices {
        if !embedded_vertex[v] {
            continue;
        }
        for &u in &adj[v] {
            if v < u && embedded_vertex[u] && !embedded_edges.contains(&(v, u)) {
                out.push(Fragment {
                    inner: Vec::new(),
                    attachments: BTreeSet::from([v, u]),
                });
            }
        }
    }
    let mut seen = vec![false; adj.len()];
    for &v in vertices {
        if embedded_vertex[v] || seen[v] {
            continue;
        }
        let mut inner = Vec::new();
        let mut attachments = BTreeSet::new();
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(x) = queue.pop_front() {
            inner.push(x);
            for &u in &adj[x] {
                if embedded_vertex[u] {
                    attachments.insert(u);
                } else if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        out.push(Fragment { inner, attachments });
    }
    out
}

/// A path through the fragment between two distinct attachments.
fn fragment_path(adj: &[Vec<usize>], frag: &Fragment, embedded_vertex: &[bool]) -> Vec<usize> {
    if frag.inner.is_empty() {
        return frag.attachments.iter().copied().collect();
    }
    let a = *frag.attachments.first().unwrap();
    let inside: BTreeSet<usize> = frag.inner.iter().copied().collect();
    let mut parent = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for &u in &adj[a] {
        if inside.contains(&u) && parent[u] == usize::MAX {
            parent[u] = a;
            queue.push_back(u);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &u in &adj[x] {
            if embedded_vertex[u] && u != a {
                let mut path = vec![u, x];
                let mut y = x;
                while parent[y] != a {
                    y = parent[y];
                    path.push(y);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if inside.contains(&u) && parent[u] == usize::MAX {
                parent[u] = x;
                queue.push_back(u);
            }
        }
    }
    unreachable!("fragments of a block have two attachments")
}

/// Splits a face cycle along a path whose ends lie on it.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let i = face.iter().position(|&x| x == path[0]).unwrap();
    let j = face.iter().position(|&x| x == *path.last().unwrap()).unwrap();
    let interior = &path[1..path.len() - 1];
    // Face walk from i to j, then back along the path.
    let mut first = Vec::new();
    let mut x = i;
    loop {
        first.push(face[x]);
        if x == j {
            break;
        }
        x = (x + 1) % k;
    }
    first.extend(interior.iter().rev());
    // Face walk from j to i, then forward along the path.
    let mut second = Vec::new();
    let mut x = j;
    loop {
        second.push(face[x]);
        if x == i {
            break;
        }
        x = (x + 1) % k;
    }
    second.extend(interior.iter());
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn complete(n: u32) -> Graph {
        let mut g = Graph::with_vertices(n as usize);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&generators::complete_bipartite(3, 3).unwrap().graph));
        assert!(is_planar(&generators::complete_bipartite(2, 7).unwrap().graph));
        // K5 minus an edge is planar.
        let mut k5 = complete(5);
        k5.remove_edge(0, 1).unwrap();
        assert!(is_planar(&k5));
    }

    #[test]
    fn subdivisions_keep_nonplanarity() {
        for s in 1..3 {
            assert!(!is_planar(&generators::subdivided_clique(5, s).unwrap().graph));
        }
        assert!(is_planar(&generators::subdivided_clique(4, 2).unwrap().graph));
    }

    #[test]
    fn petersen_is_nonplanar() {
        let mut g = Graph::with_vertices(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(i, i + 5).unwrap();
            g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
        }
        assert!(!is_planar(&g));
    }

    #[test]
    fn planar_families() {
        for seed in 0..10 {
            assert!(is_planar(&generators::random_planar(40, seed).unwrap().graph));
            assert!(is_planar(&generators::random_planar_sparse(40, seed, 50).unwrap().graph));
            assert!(is_planar(&generators::random_tree(30, seed).unwrap().graph));
        }
        assert!(is_planar(&generators::grid(8, 6).unwrap().graph));
        assert!(is_planar(&Graph::new()));
    }

    #[test]
    fn tori_are_nonplanar() {
        for (w, h) in [(3, 3), (4, 5), (6, 6)] {
            assert!(!is_planar(&generators::torus_grid(w, h).unwrap().graph));
        }
    }

    #[test]
    fn blocks_joined_at_cut_vertices() {
        // Two K5 minus an edge sharing vertex 4: planar.
        let mut g = Graph::with_vertices(9);
        for base in [0u32, 4] {
            for u in 0..5 {
                for v in u + 1..5 {
                    if (u, v) != (0, 1) {
                        g.add_edge(base + u, base + v).unwrap();
                    }
                }
            }
        }
        assert!(is_planar(&g));
        let adj: Vec<Vec<usize>> = (0..9)
            .map(|v| g.neighbors(v).iter().map(|&u| u as usize).collect())
            .collect();
        assert_eq!(blocks(&adj).len(), 2);
    }
}
