//! Refining a constant-factor dominating set to a `(1 + ε)`-approximation:
//! contract the radius-1 parts around `d`, cluster the contraction, and
//! solve each cluster exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cluster::{cluster, ExpansionBound};
use crate::error::{Error, Result};
use crate::graph::{contract_stars, Graph, Rational, Star, VertexId, VertexSet};
use crate::oracle::{exact_mds_with_cap, is_dominating, DEFAULT_ORACLE_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineOutcome {
    pub dominating_set: VertexSet,
    /// Clusters `U_i` of the original graph.
    pub clusters: Vec<VertexSet>,
    pub delta: Rational,
    pub iterations: u32,
    /// `|E(H)| / |V(H)|` of the contracted graph exceeds `nabla1_bound`.
    pub density_warning: bool,
}

#[derive(Clone, Debug)]
pub struct RefineParams {
    pub epsilon: Rational,
    pub c: Rational,
    pub nabla1_bound: Rational,
    pub expansion: ExpansionBound,
    pub cluster_cap: usize,
}

impl RefineParams {
    pub fn planar(epsilon: Rational, c: Rational) -> Self {
        RefineParams {
            epsilon,
            c,
            nabla1_bound: Rational::from(3),
            expansion: ExpansionBound::planar(),
            cluster_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

/// Parts `W_v` for `v ∈ d`: `v` and the vertices outside `d` whose
/// smallest dominator is `v`.
fn radius_one_parts(g: &Graph, d: &VertexSet) -> Vec<Star> {
    let mut parts: BTreeMap<VertexId, VertexSet> = d.iter().map(|&v| (v, VertexSet::new())).collect();
    for v in g.vertices().filter(|v| !d.contains(v)) {
        let dom = g.neighbors(v).iter().copied().find(|u| d.contains(u)).expect("d dominates");
        parts.get_mut(&dom).unwrap().insert(v);
    }
    parts.into_iter().map(|(center, leaves)| Star { center, leaves }).collect()
}

pub fn refine(g: &Graph, d: &VertexSet, params: &RefineParams) -> Result<VertexSet> {
    refine_detailed(g, d, params).map(|o| o.dominating_set)
}

pub fn refine_detailed(g: &Graph, d: &VertexSet, params: &RefineParams) -> Result<RefineOutcome> {
    if !is_dominating(g, d)? {
        return Err(Error::NotDominating);
    }
    if params.epsilon <= Rational::zero() {
        return Err(Error::InvalidParameter(format!("epsilon {} must be positive", params.epsilon)));
    }
    if params.c <= Rational::zero() || params.nabla1_bound <= Rational::zero() {
        return Err(Error::InvalidParameter("c and the density bound must be positive".into()));
    }
    let parts = radius_one_parts(g, d);
    let mut h = contract_stars(g, &parts)?.quotient;
    h.clear_weights();
    let density_warning =
        h.n() > 0 && Rational::new(h.m() as i64, h.n() as i64) > params.nabla1_bound;
    let delta = params.epsilon / (Rational::from(2) * params.c * params.nabla1_bound);
    let delta = delta.min(Rational::new(1, 2));
    let partition = cluster(&h, delta, &params.expansion)?;
    let clusters: Vec<VertexSet> = partition
        .clusters
        .iter()
        .map(|c| c.iter().flat_map(|&i| parts[i as usize].members()).collect())
        .collect();
    let mut set = VertexSet::new();
    for (index, u) in clusters.iter().enumerate() {
        if u.len() > params.cluster_cap {
            return Err(Error::ClusterTooLarge {
                index,
                size: u.len(),
                cap: params.cluster_cap,
            });
        }
        set.extend(exact_mds_with_cap(&g.induced(u), params.cluster_cap)?);
    }
    debug_assert!(is_dominating(g, &set).unwrap_or(false));
    Ok(RefineOutcome {
        dominating_set: set,
        clusters,
        delta,
        iterations: partition.iterations,
        density_warning,
    })
}

impl Default for RefineParams {
    fn default() -> Self {
        RefineParams::planar(Rational::one(), Rational::from(199))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::lenzen::modified_lenzen;
    use crate::oracle::{domination_number, greedy_mds};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn optimal_input_single_cluster() {
        let star = generators::star(5).unwrap().graph;
        let d = VertexSet::from([0]);
        let s = refine(&star, &d, &RefineParams::planar(r(1, 1), r(1, 1))).unwrap();
        assert!(s.len() <= d.len());
    }

    #[test]
    fn cycle_nine() {
        let g = generators::cycle(9).unwrap().graph;
        let d = greedy_mds(&g);
        assert_eq!(d.len(), 3);
        let mut p = RefineParams::planar(r(1, 1), r(2, 1));
        p.nabla1_bound = r(2, 1);
        let s = refine(&g, &d, &p).unwrap();
        assert!(is_dominating(&g, &s).unwrap());
        assert!(s.len() <= 2 * domination_number(&g, 25).unwrap());
    }

    #[test]
    fn grid_six_by_six() {
        let g = generators::grid(6, 6).unwrap().graph;
        let d = modified_lenzen(&g, r(3, 1)).unwrap().dominating_set;
        let mut p = RefineParams::planar(r(1, 2), r(199, 1));
        p.cluster_cap = 36;
        let s = refine(&g, &d, &p).unwrap();
        assert!(is_dominating(&g, &s).unwrap());
        assert!(s.len() <= 15);
        p.cluster_cap = 25;
        assert!(matches!(refine(&g, &d, &p), Err(Error::ClusterTooLarge { size: 36, .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = generators::path(4).unwrap().graph;
        let p = RefineParams::planar(r(1, 1), r(2, 1));
        assert_eq!(refine(&g, &VertexSet::from([0]), &p), Err(Error::NotDominating));
        let mut bad = p.clone();
        bad.epsilon = r(0, 1);
        assert!(refine(&g, &VertexSet::from([1, 2]), &bad).is_err());
    }
}
