//! Heavy pseudo-forests, the HeavyStar partition and iterated clustering.
//!
//! The HeavyStar construction: every vertex selects its heaviest incident
//! edge, the resulting pseudo-forest is 3-colored by Cole–Vishkin reduction
//! followed by shift-down, and then the color classes in turn decide whether
//! each vertex is a star center or a leaf of its out-neighbor, by the method
//! of conditional expectations on "leaf joins center" (probability 1/4 per
//! arc). The captured weight is at least a quarter of the pseudo-forest.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::generators::genus_density_bound;
use crate::graph::{contract_stars, ClusterPartition, Edge, Graph, Rational, Star, StarPartition, VertexId, VertexSet};
use crate::sim::{self, NodeProgram, RunTranscript, Step};

/// Out-degree ≤ 1 subgraph: `arcs[v]` is `v`'s out-neighbor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoForest {
    pub arcs: BTreeMap<VertexId, Option<VertexId>>,
    pub weight_retained: Rational,
}

impl PseudoForest {
    pub fn arc_count(&self) -> usize {
        self.arcs.values().filter(|a| a.is_some()).count()
    }
}

/// Heaviest incident edge, ties to the smaller neighbor.
fn heaviest(g: &Graph, v: VertexId) -> Option<VertexId> {
    let mut best: Option<(Rational, VertexId)> = None;
    for &u in g.neighbors(v) {
        let w = g.edge_weight(v, u);
        if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
            best = Some((w, u));
        }
    }
    best.map(|(_, u)| u)
}

/// Out-neighbor after dropping the larger endpoint's copy of a mutual choice.
fn resolve(v: VertexId, choice: Option<VertexId>, choice_of: impl Fn(VertexId) -> Option<VertexId>) -> Option<VertexId> {
    choice.filter(|&u| !(choice_of(u) == Some(v) && v > u))
}

/// Every vertex keeps its heaviest incident edge; an edge chosen from both
/// sides is kept once, directed from the smaller id.
pub fn pseudo_forest(g: &Graph) -> PseudoForest {
    let choice: BTreeMap<VertexId, Option<VertexId>> = g.vertices().map(|v| (v, heaviest(g, v))).collect();
    let arcs: BTreeMap<VertexId, Option<VertexId>> = choice
        .iter()
        .map(|(&v, &c)| (v, resolve(v, c, |u| choice[&u])))
        .collect();
    let weight_retained = arcs
        .iter()
        .filter_map(|(&v, &p)| p.map(|p| g.edge_weight(v, p)))
        .fold(Rational::zero(), |a, w| a + w);
    PseudoForest { arcs, weight_retained }
}

/// Cole–Vishkin iterations that bring colors below `id_bound` down to six.
pub fn cv_iterations(id_bound: u64) -> u32 {
    let mut bound = id_bound.max(2);
    let mut k = 0;
    while bound > 6 {
        let bits = 64 - (bound - 1).leading_zeros() as u64;
        bound = 2 * bits.max(1);
        k += 1;
    }
    k
}

fn cv_step(own: u64, parent: Option<u64>) -> u64 {
    match parent {
        Some(p) => {
            let i = (own ^ p).trailing_zeros() as u64;
            2 * i + ((own >> i) & 1)
        }
        None => own & 1,
    }
}

fn smallest_free(excluded: &[u64]) -> u64 {
    (0..3).find(|c| !excluded.contains(c)).expect("two exclusions leave a color")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Center,
    Leaf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beacon {
    pub choice: Option<VertexId>,
    pub color: u64,
    pub role: Option<Role>,
}

/// HeavyStar as a node program. Every node is given the weights of its
/// incident edges and a common upper bound on identifiers.
#[derive(Clone, Debug)]
pub struct HeavyStarProgram {
    weights: BTreeMap<Edge, Rational>,
    id_bound: u64,
}

#[derive(Clone, Debug)]
pub struct HeavyStarState {
    id: VertexId,
    step: u32,
    incident: BTreeMap<VertexId, Rational>,
    choice: Option<VertexId>,
    parent: Option<VertexId>,
    children: Vec<VertexId>,
    color: u64,
    old_color: u64,
    role: Option<Role>,
    known_roles: BTreeMap<VertexId, Role>,
    center: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyStarOutput {
    pub parent: Option<VertexId>,
    pub color: u64,
    pub role: Role,
    pub center: VertexId,
}

impl HeavyStarProgram {
    pub fn new(g: &Graph) -> Self {
        let weights = g.edges().map(|e| (e, g.edge_weight(e.lo(), e.hi()))).collect();
        let id_bound = g.max_id().map_or(1, |m| m as u64 + 1);
        HeavyStarProgram { weights, id_bound }
    }

    fn cv_rounds(&self) -> u32 {
        cv_iterations(self.id_bound)
    }

    fn expectation(&self, s: &HeavyStarState, role: Role) -> Rational {
        let half = Rational::new(1, 2);
        let p = |u: VertexId, want: Role| match s.known_roles.get(&u) {
            Some(&r) if r == want => Rational::one(),
            Some(_) => Rational::zero(),
            None => half,
        };
        match role {
            Role::Center => s
                .children
                .iter()
                .map(|&x| s.incident[&x] * p(x, Role::Leaf))
                .fold(Rational::zero(), |a, b| a + b),
            Role::Leaf => s.parent.map_or(Rational::zero(), |q| s.incident[&q] * p(q, Role::Center)),
        }
    }
}

impl NodeProgram for HeavyStarProgram {
    type State = HeavyStarState;
    type Message = Beacon;
    type Output = HeavyStarOutput;

    fn init(&self, id: VertexId, neighbors: &[VertexId]) -> HeavyStarState {
        let incident: BTreeMap<VertexId, Rational> = neighbors
            .iter()
            .map(|&u| (u, self.weights.get(&Edge::new(id, u)).copied().unwrap_or_else(Rational::one)))
            .collect();
        let mut choice: Option<(Rational, VertexId)> = None;
        for (&u, &w) in &incident {
            if choice.as_ref().is_none_or(|(bw, _)| w > *bw) {
                choice = Some((w, u));
            }
        }
        HeavyStarState {
            id,
            step: 0,
            incident,
            choice: choice.map(|(_, u)| u),
            parent: None,
            children: Vec::new(),
            color: id as u64,
            old_color: id as u64,
            role: None,
            known_roles: BTreeMap::new(),
            center: id,
        }
    }

    fn on_round(&self, s: &mut HeavyStarState, inbox: &BTreeMap<VertexId, Beacon>) -> Step<Beacon> {
        for (&u, b) in inbox {
            if let Some(r) = b.role {
                s.known_roles.insert(u, r);
            }
        }
        let parent_color = s.parent.and_then(|p| inbox.get(&p)).map(|b| b.color);
        let k = self.cv_rounds();
        let cv_end = 2 + k;
        let shift_end = cv_end + 6;
        let decide_end = shift_end + 3;
        let t = s.step;
        if t == 1 {
            let choice_of = |u: VertexId| inbox.get(&u).and_then(|b| b.choice);
            s.parent = resolve(s.id, s.choice, choice_of);
            s.children = inbox
                .keys()
                .copied()
                .filter(|&u| choice_of(u) == Some(s.id) && resolve(u, Some(s.id), |_| s.choice).is_some())
                .collect();
        } else if (2..cv_end).contains(&t) {
            s.color = cv_step(s.color, parent_color);
        } else if (cv_end..shift_end).contains(&t) {
            let target = 5 - (t - cv_end) as u64 / 2;
            if (t - cv_end) % 2 == 0 {
                s.old_color = s.color;
                s.color = match parent_color {
                    Some(c) => c,
                    None => smallest_free(&[s.color]),
                };
            } else if s.color == target {
                let mut excluded = alloc::vec![s.old_color];
                excluded.extend(parent_color);
                s.color = smallest_free(&excluded);
            }
        } else if (shift_end..decide_end).contains(&t) {
            if s.color == (t - shift_end) as u64 {
                let center = self.expectation(s, Role::Center);
                let leaf = self.expectation(s, Role::Leaf);
                s.role = Some(if center >= leaf { Role::Center } else { Role::Leaf });
            }
        } else if t == decide_end {
            if s.role == Some(Role::Leaf) {
                if let Some(p) = s.parent.filter(|p| s.known_roles.get(p) == Some(&Role::Center)) {
                    s.center = p;
                }
            }
            return Step::halt();
        }
        s.step += 1;
        let beacon = Beacon {
            choice: s.choice,
            color: s.color,
            role: s.role,
        };
        Step::send(s.incident.keys().map(|&u| (u, beacon.clone())).collect())
    }

    fn output(&self, s: &HeavyStarState) -> HeavyStarOutput {
        HeavyStarOutput {
            parent: s.parent,
            color: s.color,
            role: s.role.unwrap_or(Role::Center),
            center: s.center,
        }
    }
}

/// Runs [`HeavyStarProgram`] and collects the stars.
pub fn heavy_star_run(g: &Graph) -> Result<(Vec<Star>, RunTranscript<HeavyStarOutput>)> {
    let prog = HeavyStarProgram::new(g);
    let transcript = sim::run(g, &prog, sim::default_max_rounds(g.n()))?;
    let mut stars: BTreeMap<VertexId, VertexSet> = BTreeMap::new();
    for (&v, out) in &transcript.outputs {
        let leaves = stars.entry(out.center).or_default();
        if out.center != v {
            leaves.insert(v);
        }
    }
    let stars = stars
        .into_iter()
        .map(|(center, leaves)| Star { center, leaves })
        .collect();
    Ok((stars, transcript))
}

/// Star partition whose quotient keeps at most `(1 − 1/(8a))·ω̄(g)`, for
/// `a` at least the arboricity of `g`.
pub fn heavy_star_partition(g: &Graph, a: Rational) -> Result<StarPartition> {
    if a < Rational::one() {
        return Err(Error::InvalidParameter(format!("arboricity bound {a} is below 1")));
    }
    let (stars, _) = heavy_star_run(g)?;
    let partition = contract_stars(g, &stars)?;
    let target = (Rational::one() - Rational::one() / (Rational::from(8) * a)) * g.total_edge_weight();
    let kept = partition.quotient.total_edge_weight();
    if kept > target {
        return Err(Error::ClusteringBoundViolated {
            crossing: format!("{kept}"),
            target: format!("{target}"),
        });
    }
    Ok(partition)
}

/// Upper bound on `∇_r` as a function of `r`.
#[derive(Clone, Debug)]
pub enum ExpansionBound {
    Constant(Rational),
    /// `table[r]`, with the last entry extended to larger radii.
    Table(Vec<Rational>),
    Function(fn(u64) -> Rational),
}

impl ExpansionBound {
    pub fn planar() -> Self {
        ExpansionBound::Constant(Rational::from(3))
    }

    /// `⌈5√g⌉`, or the planar constant for `g = 0`.
    pub fn genus(genus: u32) -> Self {
        ExpansionBound::Constant(Rational::from(genus_density_bound(genus) as i64))
    }

    pub fn at(&self, r: u64) -> Rational {
        match self {
            ExpansionBound::Constant(c) => *c,
            ExpansionBound::Table(t) => t
                .get(r as usize)
                .or(t.last())
                .copied()
                .unwrap_or_else(Rational::zero),
            ExpansionBound::Function(f) => f(r),
        }
    }
}

/// `(3^i − 1)/2`, saturated.
pub fn depth_for(i: u32) -> u64 {
    3u64.checked_pow(i).map_or(u64::MAX, |p| (p - 1) / 2)
}

/// `2·f((3^i − 1)/2)`.
pub fn gfun(bound: &ExpansionBound, i: u32) -> Rational {
    Rational::from(2) * bound.at(depth_for(i))
}

pub const I0_CAP: u32 = 1_000_000;

/// Least `i ≥ 1` with `(1 − 1/(8·gfun(i)))^i ≤ ε`.
pub fn find_i0(epsilon: Rational, bound: &ExpansionBound) -> Result<u32> {
    check_epsilon(epsilon)?;
    let ln_eps = libm::log(epsilon.to_f64().unwrap_or(0.0));
    for i in 1..=I0_CAP {
        let a = gfun(bound, i);
        if a * Rational::from(8) <= Rational::one() {
            return Err(Error::InvalidParameter(format!("expansion bound {} is below 1/16", bound.at(depth_for(i)))));
        }
        let base = Rational::one() - Rational::one() / (Rational::from(8) * a);
        let lhs = i as f64 * libm::log(base.to_f64().unwrap_or(1.0));
        let slack = 1e-9 * (1.0 + libm::fabs(ln_eps));
        if lhs > ln_eps + slack {
            continue;
        }
        if lhs < ln_eps - slack || power_at_most(base, i, epsilon) {
            return Ok(i);
        }
    }
    Err(Error::IterationCapExceeded(I0_CAP as u64))
}

/// Exact `base^i ≤ eps` for positive rationals.
fn power_at_most(base: Rational, i: u32, eps: Rational) -> bool {
    let big = |x: i64| BigUint::from(x as u64);
    big(*base.numer()).pow(i) * big(*eps.denom()) <= big(*base.denom()).pow(i) * big(*eps.numer())
}

fn check_epsilon(epsilon: Rational) -> Result<()> {
    if epsilon <= Rational::zero() || epsilon >= Rational::one() {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} is outside (0, 1)")));
    }
    Ok(())
}

/// Iterates HeavyStar `i0` times and returns the preimages of the final
/// quotient vertices. Crossing weight is at most `ε·ω̄(g)`.
pub fn cluster(g: &Graph, epsilon: Rational, bound: &ExpansionBound) -> Result<ClusterPartition> {
    let i0 = find_i0(epsilon, bound)?;
    let a = gfun(bound, i0).max(Rational::one());
    let mut groups: Vec<VertexSet> = g.vertices().map(|v| VertexSet::from([v])).collect();
    let mut h = g.clone();
    // Relabel to 0..n so quotient ids index `groups`.
    if g.vertices().enumerate().any(|(i, v)| v != i as VertexId) {
        h = relabel(g);
    }
    for _ in 0..i0 {
        if h.m() == 0 {
            break;
        }
        let sp = heavy_star_partition(&h, a)?;
        groups = sp
            .stars
            .iter()
            .map(|s| s.members().flat_map(|v| groups[v as usize].iter().copied()).collect())
            .collect();
        h = sp.quotient;
    }
    let crossing = h.total_edge_weight();
    let target = epsilon * g.total_edge_weight();
    if crossing > target {
        return Err(Error::ClusteringBoundViolated {
            crossing: format!("{crossing}"),
            target: format!("{target}"),
        });
    }
    Ok(ClusterPartition {
        clusters: groups,
        iterations: i0,
        radius_bound: depth_for(i0),
    })
}

fn relabel(g: &Graph) -> Graph {
    let ids: Vec<VertexId> = g.vertices().collect();
    let pos = |v: VertexId| ids.binary_search(&v).unwrap() as VertexId;
    let mut h = Graph::with_vertices(ids.len());
    for e in g.edges() {
        let (a, b) = (pos(e.lo()), pos(e.hi()));
        h.add_edge(a, b).expect("relabeled edge");
        let w = g.edge_weight(e.lo(), e.hi());
        if w != Rational::one() {
            h.set_edge_weight(a, b, w).expect("positive weight");
        }
    }
    h
}

/// Total weight of edges whose endpoints lie in different clusters.
pub fn crossing_weight(g: &Graph, clusters: &[VertexSet]) -> Rational {
    let owner: BTreeMap<VertexId, usize> = clusters
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&v| (v, i)))
        .collect();
    g.edges()
        .filter(|e| owner.get(&e.lo()) != owner.get(&e.hi()))
        .map(|e| g.edge_weight(e.lo(), e.hi()))
        .fold(Rational::zero(), |a, b| a + b)
}
