//! Ground truth for desk-scale verification: domination checks, an exact
//! minimum dominating set solver and approximation ratios.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Rational, VertexId, VertexSet};

pub const DEFAULT_ORACLE_CAP: usize = 25;
/// The exact solver works on 64-bit vertex masks.
pub const MAX_ORACLE_CAP: usize = 64;

/// `N[s] = V(g)`.
pub fn is_dominating(g: &Graph, s: &VertexSet) -> Result<bool> {
    for &v in s {
        g.check_vertex(v)?;
    }
    Ok(g.closed_neighborhood_of_set(s).len() == g.n())
}

/// Vertices of `g` not in `N[s]`.
pub fn undominated(g: &Graph, s: &VertexSet) -> VertexSet {
    let covered = g.closed_neighborhood_of_set(s.iter().filter(|v| g.contains(**v)));
    g.vertices().filter(|v| !covered.contains(v)).collect()
}

/// Minimum dominating set with the default vertex cap.
pub fn exact_mds(g: &Graph) -> Result<VertexSet> {
    exact_mds_with_cap(g, DEFAULT_ORACLE_CAP)
}

/// Minimum dominating set; among minimum sets the one whose sorted id
/// sequence is lexicographically smallest.
pub fn exact_mds_with_cap(g: &Graph, cap: usize) -> Result<VertexSet> {
    let cap = cap.min(MAX_ORACLE_CAP);
    if g.n() > cap {
        return Err(Error::SearchRefused {
            what: "exact dominating set instance",
            size: g.n(),
            cap,
        });
    }
    let solver = Solver::new(g);
    let full = solver.full;
    let gamma = solver.gamma();
    // Fix elements one by one, each time taking the smallest index that still
    // extends to a dominating set of size gamma.
    let mut chosen = Vec::new();
    let mut undominated = full;
    let mut floor = 0usize;
    while undominated != 0 {
        let left = gamma - chosen.len() as u32;
        let x = (floor..solver.n)
            .find(|&x| {
                let allowed = full & !low_mask(x + 1);
                solver.feasible(undominated & !solver.closed[x], allowed, left - 1)
            })
            .expect("gamma is attainable");
        chosen.push(x);
        undominated &= !solver.closed[x];
        floor = x + 1;
    }
    Ok(chosen.into_iter().map(|i| solver.ids[i]).collect())
}

/// `γ(g)`.
pub fn domination_number(g: &Graph, cap: usize) -> Result<usize> {
    if g.n() > cap.min(MAX_ORACLE_CAP) {
        return Err(Error::SearchRefused {
            what: "exact dominating set instance",
            size: g.n(),
            cap: cap.min(MAX_ORACLE_CAP),
        });
    }
    Ok(Solver::new(g).gamma() as usize)
}

/// `|s| / γ(g)` as an exact rational.
pub fn ratio(g: &Graph, s: &VertexSet) -> Result<Rational> {
    ratio_with_cap(g, s, DEFAULT_ORACLE_CAP)
}

pub fn ratio_with_cap(g: &Graph, s: &VertexSet, cap: usize) -> Result<Rational> {
    if !is_dominating(g, s)? {
        return Err(Error::NotDominating);
    }
    let gamma = domination_number(g, cap)?;
    if gamma == 0 {
        return Ok(Rational::from(1));
    }
    Ok(Rational::new(s.len() as i64, gamma as i64))
}

/// Set-cover greedy: repeatedly take the vertex dominating the most
/// undominated vertices, smallest id on ties. An `ln n` approximation.
pub fn greedy_mds(g: &Graph) -> VertexSet {
    let mut covered = VertexSet::new();
    let mut out = VertexSet::new();
    while covered.len() < g.n() {
        let best = g
            .vertices()
            .max_by_key(|&v| {
                let gain = g.closed_neighbors(v).filter(|u| !covered.contains(u)).count();
                (gain, core::cmp::Reverse(v))
            })
            .expect("non-empty while uncovered vertices remain");
        out.insert(best);
        covered.extend(g.closed_neighbors(best));
    }
    out
}

fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

struct Solver {
    n: usize,
    ids: Vec<VertexId>,
    closed: Vec<u64>,
    full: u64,
}

impl Solver {
    fn new(g: &Graph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index = |v: VertexId| ids.binary_search(&v).unwrap();
        let closed = ids
            .iter()
            .map(|&v| g.closed_neighbors(v).fold(0u64, |m, u| m | 1 << index(u)))
            .collect();
        Solver {
            n: ids.len(),
            full: low_mask(ids.len()),
            ids,
            closed,
        }
    }

    fn gamma(&self) -> u32 {
        let upper = self.greedy_bound();
        (0..=upper)
            .find(|&k| self.feasible(self.full, self.full, k))
            .unwrap_or(upper)
    }

    fn greedy_bound(&self) -> u32 {
        let mut left = self.full;
        let mut count = 0;
        while left != 0 {
            let best = (0..self.n)
                .max_by_key(|&i| (self.closed[i] & left).count_ones())
                .unwrap();
            left &= !self.closed[best];
            count += 1;
        }
        count
    }

    /// Can `budget` vertices from `allowed` dominate `undominated`?
    fn feasible(&self, undominated: u64, mut allowed: u64, budget: u32) -> bool {
        if undominated == 0 {
            return true;
        }
        if budget == 0 {
            return false;
        }
        // Lower bound: ceil(|undominated| / best single-vertex gain).
        let mut best_gain = 0;
        let mut bits = allowed;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            best_gain = best_gain.max((self.closed[i] & undominated).count_ones());
        }
        if best_gain == 0 || undominated.count_ones().div_ceil(best_gain) > budget {
            return false;
        }
        // Branch on the undominated vertex with the fewest candidates.
        let mut pick = 0u64;
        let mut fewest = u32::MAX;
        let mut bits = undominated;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let c = (self.closed[i] & allowed).count_ones();
            if c < fewest {
                fewest = c;
                pick = self.closed[i] & allowed;
            }
        }
        while pick != 0 {
            let w = pick.trailing_zeros() as usize;
            pick &= pick - 1;
            if self.feasible(undominated & !self.closed[w], allowed, budget - 1) {
                return true;
            }
            // Any solution using w was explored above.
            allowed &= !(1u64 << w);
        }
        false
    }
}
