//! Two-phase dominating set approximation and its genus-aware variant.
//!
//! Phase 1 takes every vertex whose open neighborhood cannot be dominated by
//! `2c` other vertices. Phase 2 lets each still undominated vertex elect the
//! neighbor (or itself) that dominates the most undominated vertices. The
//! genus variant additionally absorbs pairwise disjoint canonical `K_{3,3}`
//! subgraphs into the first set before phase 2.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generators::genus_density_bound;
use crate::graph::{Graph, Rational, VertexId, VertexSet};
use crate::minor::canonical_k33_subgraph;
use crate::sim::{self, GatherBall, GatherState, Knowledge, NodeProgram, Step};

/// Radius of the snapshot each node takes in the distributed variant.
pub const LENZEN_GATHER_RADIUS: u32 = 5;
/// Snapshot rounds plus one round to notify the elected dominators.
pub const LENZEN_ROUNDS: u32 = LENZEN_GATHER_RADIUS + 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MdsResult {
    pub dominating_set: VertexSet,
    pub phase1_set: VertexSet,
    pub preprocessing_set: VertexSet,
    pub phase2_set: VertexSet,
    pub rounds_used: u32,
}

impl MdsResult {
    fn assemble(phase1_set: VertexSet, preprocessing_set: VertexSet, phase2_set: VertexSet, rounds_used: u32) -> Self {
        let dominating_set = phase1_set
            .iter()
            .chain(&preprocessing_set)
            .chain(&phase2_set)
            .copied()
            .collect();
        MdsResult {
            dominating_set,
            phase1_set,
            preprocessing_set,
            phase2_set,
            rounds_used,
        }
    }
}

/// Is there `A ⊆ V ∖ {v}`, `|A| ≤ k`, with `N(v) ⊆ N[A]`?
pub fn coverable(g: &Graph, v: VertexId, k: usize) -> Result<bool> {
    g.check_vertex(v)?;
    Ok(coverable_unchecked(g, v, k))
}

fn coverable_unchecked(g: &Graph, v: VertexId, k: usize) -> bool {
    let nbrs: Vec<VertexId> = g.neighbors(v).iter().copied().collect();
    if nbrs.len() <= k {
        return true;
    }
    let index = |u: VertexId| nbrs.binary_search(&u).ok();
    let words = nbrs.len().div_ceil(64);
    // What each candidate w ∈ N²[v] ∖ {v} covers, as a bitset over N(v).
    let mut covers: BTreeMap<VertexId, Vec<u64>> = BTreeMap::new();
    for &u in &nbrs {
        for w in g.closed_neighbors(u) {
            if w == v || covers.contains_key(&w) {
                continue;
            }
            let mut bits = vec![0u64; words];
            for x in g.closed_neighbors(w) {
                if let Some(i) = index(x) {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            covers.insert(w, bits);
        }
    }
    let mut uncovered = vec![0u64; words];
    for i in 0..nbrs.len() {
        uncovered[i / 64] |= 1 << (i % 64);
    }
    let cands: Vec<&Vec<u64>> = covers.values().collect();
    cover_search(&nbrs, &covers, &cands, &mut uncovered, k)
}

fn cover_search(
    nbrs: &[VertexId],
    covers: &BTreeMap<VertexId, Vec<u64>>,
    cands: &[&Vec<u64>],
    uncovered: &mut Vec<u64>,
    budget: usize,
) -> bool {
    let left: u32 = uncovered.iter().map(|w| w.count_ones()).sum();
    if left == 0 {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let gain = |c: &Vec<u64>| -> u32 { c.iter().zip(uncovered.iter()).map(|(a, b)| (a & b).count_ones()).sum() };
    let best = cands.iter().map(|c| gain(c)).max().unwrap_or(0);
    if best == 0 || left.div_ceil(best) as usize > budget {
        return false;
    }
    // Branch on the uncovered neighbor with the fewest candidates.
    let pick = (0..nbrs.len())
        .filter(|&i| uncovered[i / 64] >> (i % 64) & 1 == 1)
        .min_by_key(|&i| {
            covers
                .values()
                .filter(|c| c[i / 64] >> (i % 64) & 1 == 1)
                .count()
        })
        .unwrap();
    let options: Vec<&Vec<u64>> = covers
        .values()
        .filter(|c| c[pick / 64] >> (pick % 64) & 1 == 1)
        .collect();
    for c in options {
        let saved = uncovered.clone();
        for (u, w) in uncovered.iter_mut().zip(c) {
            *u &= !w;
        }
        if cover_search(nbrs, covers, cands, uncovered, budget - 1) {
            return true;
        }
        *uncovered = saved;
    }
    false
}

/// `⌊2c⌋` for `c ≥ 1`.
pub fn cover_budget(c: Rational) -> Result<usize> {
    if c < Rational::from(1) {
        return Err(Error::InvalidParameter(alloc::format!("density bound c must be >= 1, got {c}")));
    }
    Ok((c * 2).floor().to_integer() as usize)
}

/// `{ v : N(v) cannot be dominated by ⌊2c⌋ vertices other than v }`.
pub fn phase1(g: &Graph, c: Rational) -> Result<VertexSet> {
    Ok(phase1_with_budget(g, cover_budget(c)?))
}

pub fn phase1_with_budget(g: &Graph, k: usize) -> VertexSet {
    g.vertices().filter(|&v| !coverable_unchecked(g, v, k)).collect()
}

/// The vertex `v` elects: among `N[v]` the one with the most neighbors
/// outside `N[d]`, smallest id on ties. `None` when `v ∈ N[d]`.
pub fn dominator(g: &Graph, d: &VertexSet, v: VertexId) -> Option<VertexId> {
    let dominated = |x: VertexId| g.closed_neighbors(x).any(|y| d.contains(&y));
    if dominated(v) {
        return None;
    }
    let residual = |w: VertexId| g.closed_neighbors(w).filter(|&x| !dominated(x)).count();
    g.closed_neighbors(v)
        .map(|w| (residual(w), core::cmp::Reverse(w)))
        .max()
        .map(|(_, core::cmp::Reverse(w))| w)
}

/// Image of [`dominator`] over the vertices not yet dominated by `d`.
pub fn phase2(g: &Graph, d: &VertexSet) -> VertexSet {
    let covered = g.closed_neighborhood_of_set(d.iter().filter(|v| g.contains(**v)));
    let residual: BTreeMap<VertexId, usize> = g
        .vertices()
        .map(|w| (w, g.closed_neighbors(w).filter(|x| !covered.contains(x)).count()))
        .collect();
    g.vertices()
        .filter(|v| !covered.contains(v))
        .map(|v| {
            g.closed_neighbors(v)
                .max_by_key(|&w| (residual[&w], core::cmp::Reverse(w)))
                .expect("closed neighborhoods are non-empty")
        })
        .collect()
}

pub fn modified_lenzen(g: &Graph, c: Rational) -> Result<MdsResult> {
    let d = phase1(g, c)?;
    let d2 = phase2(g, &d);
    Ok(MdsResult::assemble(d, VertexSet::new(), d2, LENZEN_ROUNDS))
}

/// Approximation factor `6c²t + (2t+5)c + 4` for inputs whose depth-1
/// minors have density at most `c` and that exclude `K_{3,t}`.
pub fn approximation_bound(c: u64, t: u64) -> u64 {
    6 * c * c * t + (2 * t + 5) * c + 4
}

/// Rounds of the distributed genus variant: a 2-round phase 1, a 6-round
/// snapshot for the canonical subgraphs, 24 rounds per preprocessing
/// iteration and 4 rounds of phase 2. Without preprocessing the phases fuse
/// into the plain algorithm's schedule.
pub fn genus_rounds(genus: u32) -> u32 {
    if genus == 0 {
        LENZEN_ROUNDS
    } else {
        2 + 6 + 24 * genus + 4
    }
}

fn check_genus(genus: i64) -> Result<u32> {
    u32::try_from(genus).map_err(|_| Error::InvalidParameter(alloc::format!("genus must be >= 0, got {genus}")))
}

pub fn genus_algorithm(g: &Graph, genus: i64) -> Result<MdsResult> {
    let genus = check_genus(genus)?;
    let k = 2 * genus_density_bound(genus) as usize;
    let d = phase1_with_budget(g, k);
    let mut preprocessing = VertexSet::new();
    if genus > 0 {
        let rest = g.without(&d);
        let mut candidates: BTreeMap<VertexId, VertexSet> = BTreeMap::new();
        for v in rest.vertices() {
            if let Some(k) = canonical_k33_subgraph(&rest, v)? {
                candidates.insert(v, k.vertex_set());
            }
        }
        for _ in 0..genus {
            let chosen: Vec<VertexId> = candidates
                .iter()
                .filter(|(v, kv)| {
                    candidates
                        .range(..**v)
                        .all(|(_, ku)| ku.is_disjoint(kv))
                })
                .map(|(&v, _)| v)
                .collect();
            if chosen.is_empty() {
                break;
            }
            let added: VertexSet = chosen.iter().flat_map(|v| candidates[v].iter().copied()).collect();
            candidates.retain(|_, kv| kv.is_disjoint(&added));
            preprocessing.extend(added);
        }
    }
    let all: VertexSet = d.union(&preprocessing).copied().collect();
    let d2 = phase2(g, &all);
    Ok(MdsResult::assemble(d, preprocessing, d2, genus_rounds(genus)))
}

/// Per-node result of the distributed variants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeOutput {
    pub in_phase1: bool,
    pub in_preprocessing: bool,
    pub in_phase2: bool,
}

fn collect(outputs: &BTreeMap<VertexId, NodeOutput>, rounds: u32) -> MdsResult {
    let pick = |f: fn(&NodeOutput) -> bool| outputs.iter().filter(|(_, o)| f(o)).map(|(&v, _)| v).collect();
    MdsResult::assemble(
        pick(|o| o.in_phase1),
        pick(|o| o.in_preprocessing),
        pick(|o| o.in_phase2),
        rounds,
    )
}

/// The plain algorithm as a node program: snapshot `G[N^5[v]]`, decide
/// phase-1 membership and `dom(v)` locally, then notify `dom(v)`.
#[derive(Clone, Debug)]
pub struct LenzenProgram {
    budget: usize,
    gather: GatherBall,
}

impl LenzenProgram {
    pub fn new(c: Rational) -> Result<Self> {
        Ok(LenzenProgram {
            budget: cover_budget(c)?,
            gather: sim::gather_ball_program(LENZEN_GATHER_RADIUS),
        })
    }
}

#[derive(Clone, Debug)]
pub struct LenzenState {
    gather: GatherState,
    gathered: bool,
    out: NodeOutput,
}

#[derive(Clone, Debug)]
pub enum LenzenMessage {
    Gather(Knowledge),
    Elect,
}

impl NodeProgram for LenzenProgram {
    type State = LenzenState;
    type Message = LenzenMessage;
    type Output = NodeOutput;

    fn init(&self, id: VertexId, neighbors: &[VertexId]) -> LenzenState {
        LenzenState {
            gather: self.gather.init(id, neighbors),
            gathered: false,
            out: NodeOutput::default(),
        }
    }

    fn on_round(&self, state: &mut LenzenState, inbox: &BTreeMap<VertexId, LenzenMessage>) -> Step<LenzenMessage> {
        if state.gathered {
            state.out.in_phase2 |= inbox.values().any(|m| matches!(m, LenzenMessage::Elect));
            return Step::halt();
        }
        let knowledge: BTreeMap<VertexId, Knowledge> = inbox
            .iter()
            .filter_map(|(&u, m)| match m {
                LenzenMessage::Gather(k) => Some((u, k.clone())),
                LenzenMessage::Elect => None,
            })
            .collect();
        let step = self.gather.step(&mut state.gather, &knowledge);
        if !step.halted {
            return Step::send(step.outbox.into_iter().map(|(u, k)| (u, LenzenMessage::Gather(k))).collect());
        }
        state.gathered = true;
        let v = state.gather.id;
        let ball = state.gather.ball();
        // Phase-1 membership is exact on N^3[v] from this snapshot.
        let near = ball.ball(v, 3).expect("own vertex");
        let d: VertexSet = near
            .into_iter()
            .filter(|&u| !coverable_unchecked(&ball, u, self.budget))
            .collect();
        state.out.in_phase1 = d.contains(&v);
        match dominator(&ball, &d, v) {
            Some(w) if w == v => {
                state.out.in_phase2 = true;
                Step::send(BTreeMap::new())
            }
            Some(w) => Step::send(BTreeMap::from([(w, LenzenMessage::Elect)])),
            None => Step::send(BTreeMap::new()),
        }
    }

    fn output(&self, state: &LenzenState) -> NodeOutput {
        state.out.clone()
    }
}

pub fn modified_lenzen_distributed(g: &Graph, c: Rational) -> Result<MdsResult> {
    let prog = LenzenProgram::new(c)?;
    let t = sim::run(g, &prog, sim::default_max_rounds(g.n()))?;
    Ok(collect(&t.outputs, t.rounds_used))
}

/// The genus variant as a node program, staged as described at
/// [`genus_rounds`].
#[derive(Clone, Debug)]
pub struct GenusProgram {
    genus: u32,
    budget: usize,
}

impl GenusProgram {
    pub fn new(genus: i64) -> Result<Self> {
        let genus = check_genus(genus)?;
        Ok(GenusProgram {
            genus,
            budget: 2 * genus_density_bound(genus) as usize,
        })
    }

    fn schedule(&self) -> Schedule {
        let phase1_end = 2;
        let snapshot_end = if self.genus == 0 { phase1_end } else { phase1_end + 6 };
        Schedule {
            phase1_end,
            snapshot_end,
            iterations_end: snapshot_end + 24 * self.genus,
        }
    }
}

struct Schedule {
    phase1_end: u32,
    snapshot_end: u32,
    iterations_end: u32,
}

#[derive(Clone, Debug)]
pub struct GenusState {
    id: VertexId,
    neighbors: VertexSet,
    step: u32,
    gather: GatherState,
    /// Vertex → (adjacency list, in phase-1 set), learned in the snapshot.
    flagged: BTreeMap<VertexId, (VertexSet, bool)>,
    fresh: BTreeMap<VertexId, (VertexSet, bool)>,
    in_d: bool,
    candidate: Option<VertexSet>,
    /// Canonical subgraphs heard of in the current flooding stage.
    heard: BTreeMap<VertexId, VertexSet>,
    relay: BTreeMap<VertexId, VertexSet>,
    chosen: bool,
    dominated: bool,
    residual: BTreeMap<VertexId, usize>,
    dominated_nbrs: BTreeMap<VertexId, bool>,
    out: NodeOutput,
    error: Option<Error>,
}

#[derive(Clone, Debug)]
pub enum GenusMessage {
    Gather(Knowledge),
    Flagged(BTreeMap<VertexId, (VertexSet, bool)>),
    Subgraphs(BTreeMap<VertexId, VertexSet>),
    InD(bool),
    Dominated(bool),
    Residual(usize),
    Elect,
}

fn to_all<M: Clone>(nbrs: &VertexSet, m: M) -> Step<M> {
    Step::send(nbrs.iter().map(|&u| (u, m.clone())).collect())
}

impl GenusProgram {
    fn finish_phase1(&self, s: &mut GenusState) {
        let ball = s.gather.ball();
        s.in_d = !coverable_unchecked(&ball, s.id, self.budget);
        s.out.in_phase1 = s.in_d;
        let own = (s.neighbors.clone(), s.in_d);
        s.flagged.insert(s.id, own.clone());
        s.fresh.insert(s.id, own);
    }

    fn compute_candidate(&self, s: &mut GenusState) {
        if s.in_d {
            return;
        }
        let known: Knowledge = s.flagged.iter().map(|(&v, (n, _))| (v, n.clone())).collect();
        let d: VertexSet = s.flagged.iter().filter(|(_, (_, f))| *f).map(|(&v, _)| v).collect();
        let local = sim::ball_from_knowledge(&known).without(&d);
        match canonical_k33_subgraph(&local, s.id) {
            Ok(k) => s.candidate = k.map(|k| k.vertex_set()),
            Err(e) => s.error = Some(e),
        }
    }

    fn merge(s: &mut GenusState, inbox: &BTreeMap<VertexId, GenusMessage>) {
        for m in inbox.values() {
            if let GenusMessage::Subgraphs(ks) = m {
                for (&u, k) in ks {
                    if !s.heard.contains_key(&u) {
                        s.heard.insert(u, k.clone());
                        s.relay.insert(u, k.clone());
                    }
                }
            }
        }
    }

    fn relay(s: &mut GenusState) -> Step<GenusMessage> {
        let fresh = core::mem::take(&mut s.relay);
        to_all(&s.neighbors, GenusMessage::Subgraphs(fresh))
    }

    fn start_flood(s: &mut GenusState, own: Option<VertexSet>) {
        s.heard.clear();
        s.relay.clear();
        if let Some(k) = own {
            s.heard.insert(s.id, k.clone());
            s.relay.insert(s.id, k);
        }
    }

    /// End of an iteration: every chosen subgraph within 12 hops is known.
    /// Members join the set, and candidates meeting a chosen subgraph
    /// retire.
    fn absorb(s: &mut GenusState, inbox: &BTreeMap<VertexId, GenusMessage>) {
        Self::merge(s, inbox);
        if s.heard.values().any(|k| k.contains(&s.id)) {
            s.in_d = true;
            s.out.in_preprocessing = true;
        }
        if let Some(kv) = &s.candidate {
            if s.heard.values().any(|k| !k.is_disjoint(kv)) {
                s.candidate = None;
            }
        }
    }
}

impl NodeProgram for GenusProgram {
    type State = GenusState;
    type Message = GenusMessage;
    type Output = core::result::Result<NodeOutput, Error>;

    fn init(&self, id: VertexId, neighbors: &[VertexId]) -> GenusState {
        GenusState {
            id,
            neighbors: neighbors.iter().copied().collect(),
            step: 0,
            gather: sim::gather_ball_program(2).init(id, neighbors),
            flagged: BTreeMap::new(),
            fresh: BTreeMap::new(),
            in_d: false,
            candidate: None,
            heard: BTreeMap::new(),
            relay: BTreeMap::new(),
            chosen: false,
            dominated: false,
            residual: BTreeMap::new(),
            dominated_nbrs: BTreeMap::new(),
            out: NodeOutput::default(),
            error: None,
        }
    }

    fn on_round(&self, s: &mut GenusState, inbox: &BTreeMap<VertexId, GenusMessage>) -> Step<GenusMessage> {
        let sched = self.schedule();
        let step = s.step;
        s.step += 1;
        if step < sched.phase1_end {
            let knowledge = inbox
                .iter()
                .filter_map(|(&u, m)| match m {
                    GenusMessage::Gather(k) => Some((u, k.clone())),
                    _ => None,
                })
                .collect();
            let st = sim::gather_ball_program(2).step(&mut s.gather, &knowledge);
            return Step::send(st.outbox.into_iter().map(|(u, k)| (u, GenusMessage::Gather(k))).collect());
        }
        if step == sched.phase1_end {
            let knowledge = inbox
                .iter()
                .filter_map(|(&u, m)| match m {
                    GenusMessage::Gather(k) => Some((u, k.clone())),
                    _ => None,
                })
                .collect();
            sim::gather_ball_program(2).step(&mut s.gather, &knowledge);
            self.finish_phase1(s);
        }
        if step >= sched.phase1_end && step < sched.snapshot_end {
            for m in inbox.values() {
                if let GenusMessage::Flagged(f) = m {
                    for (&v, entry) in f {
                        if !s.flagged.contains_key(&v) {
                            s.flagged.insert(v, entry.clone());
                            s.fresh.insert(v, entry.clone());
                        }
                    }
                }
            }
            let fresh = core::mem::take(&mut s.fresh);
            return to_all(&s.neighbors, GenusMessage::Flagged(fresh));
        }
        if step == sched.snapshot_end && self.genus > 0 {
            for m in inbox.values() {
                if let GenusMessage::Flagged(f) = m {
                    for (&v, entry) in f {
                        s.flagged.entry(v).or_insert_with(|| entry.clone());
                    }
                }
            }
            self.compute_candidate(s);
        }
        if step >= sched.snapshot_end && step < sched.iterations_end {
            let offset = (step - sched.snapshot_end) % 24;
            if offset == 0 {
                if step > sched.snapshot_end {
                    Self::absorb(s, inbox);
                }
                // Candidates announce their subgraphs for 12 rounds.
                let own = s.candidate.clone();
                Self::start_flood(s, own);
                return Self::relay(s);
            }
            Self::merge(s, inbox);
            if offset == 12 {
                s.chosen = match &s.candidate {
                    Some(kv) => s.heard.range(..s.id).all(|(_, ku)| ku.is_disjoint(kv)),
                    None => false,
                };
                // Chosen subgraphs are announced for 12 rounds.
                let own = if s.chosen { s.candidate.clone() } else { None };
                Self::start_flood(s, own);
            }
            return Self::relay(s);
        }
        let p2 = step - sched.iterations_end;
        match p2 {
            0 => {
                if self.genus > 0 {
                    Self::absorb(s, inbox);
                }
                to_all(&s.neighbors, GenusMessage::InD(s.in_d))
            }
            1 => {
                s.dominated = s.in_d || inbox.values().any(|m| matches!(m, GenusMessage::InD(true)));
                to_all(&s.neighbors, GenusMessage::Dominated(s.dominated))
            }
            2 => {
                for (&u, m) in inbox {
                    if let GenusMessage::Dominated(f) = m {
                        s.dominated_nbrs.insert(u, *f);
                    }
                }
                let own = s.neighbors.iter().filter(|u| !s.dominated_nbrs[u]).count() + usize::from(!s.dominated);
                s.residual.insert(s.id, own);
                to_all(&s.neighbors, GenusMessage::Residual(own))
            }
            3 => {
                for (&u, m) in inbox {
                    if let GenusMessage::Residual(r) = m {
                        s.residual.insert(u, *r);
                    }
                }
                if s.dominated {
                    return Step::send(BTreeMap::new());
                }
                let w = s
                    .residual
                    .iter()
                    .max_by_key(|(&w, &r)| (r, core::cmp::Reverse(w)))
                    .map(|(&w, _)| w)
                    .unwrap();
                if w == s.id {
                    s.out.in_phase2 = true;
                    Step::send(BTreeMap::new())
                } else {
                    Step::send(BTreeMap::from([(w, GenusMessage::Elect)]))
                }
            }
            _ => {
                s.out.in_phase2 |= inbox.values().any(|m| matches!(m, GenusMessage::Elect));
                Step::halt()
            }
        }
    }

    fn output(&self, s: &GenusState) -> core::result::Result<NodeOutput, Error> {
        match &s.error {
            Some(e) => Err(e.clone()),
            None => Ok(s.out.clone()),
        }
    }
}

pub fn genus_algorithm_distributed(g: &Graph, genus: i64) -> Result<MdsResult> {
    let prog = GenusProgram::new(genus)?;
    let t = sim::run(g, &prog, genus_rounds(prog.genus) + sim::default_max_rounds(g.n()))?;
    let mut outputs = BTreeMap::new();
    for (v, o) in t.outputs {
        outputs.insert(v, o?);
    }
    Ok(collect(&outputs, t.rounds_used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::{self, is_dominating};

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    /// Subsets of `V ∖ {v}` up to size `k`.
    fn brute_coverable(g: &Graph, v: VertexId, k: usize) -> bool {
        let others: Vec<VertexId> = g.vertices().filter(|&u| u != v).collect();
        fn go(g: &Graph, v: VertexId, others: &[VertexId], from: usize, k: usize, a: &mut VertexSet) -> bool {
            let covered = g.closed_neighborhood_of_set(a.iter());
            if g.neighbors(v).iter().all(|u| covered.contains(u)) {
                return true;
            }
            if k == 0 {
                return false;
            }
            (from..others.len()).any(|i| {
                a.insert(others[i]);
                let ok = go(g, v, others, i + 1, k - 1, a);
                a.remove(&others[i]);
                ok
            })
        }
        go(g, v, &others, 0, k, &mut VertexSet::new())
    }

    #[test]
    fn coverable_examples() {
        let star = generators::star(7).unwrap().graph;
        assert!(!coverable(&star, 0, 6).unwrap());
        assert!(coverable(&star, 0, 7).unwrap());
        let tri = generators::cycle(3).unwrap().graph;
        assert!(tri.vertices().all(|v| coverable(&tri, v, 1).unwrap()));
        let grid = generators::grid(6, 6).unwrap().graph;
        assert!(coverable(&grid, 14, 4).unwrap());
        assert!(matches!(coverable(&grid, 99, 1), Err(Error::UnknownVertex(99))));
    }

    #[test]
    fn coverable_agrees_with_enumeration() {
        for seed in 0..4 {
            let g = generators::random_planar(11, seed).unwrap().graph;
            for v in g.vertices() {
                for k in 0..4 {
                    assert_eq!(coverable(&g, v, k).unwrap(), brute_coverable(&g, v, k), "v={v} k={k}");
                    if coverable(&g, v, k).unwrap() {
                        assert!(coverable(&g, v, k + 1).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn phase1_examples() {
        let star = generators::star(7).unwrap().graph;
        assert_eq!(phase1(&star, r(3)).unwrap(), VertexSet::from([0]));
        let grid = generators::grid(6, 6).unwrap().graph;
        assert!(phase1(&grid, r(3)).unwrap().is_empty());
        let k37 = generators::complete_bipartite(3, 7).unwrap().graph;
        assert!(phase1(&k37, r(3)).unwrap().is_empty());
        assert!(matches!(phase1(&grid, Rational::new(1, 2)), Err(Error::InvalidParameter(_))));
        assert_eq!(cover_budget(Rational::new(7, 4)).unwrap(), 3);
    }

    #[test]
    fn phase2_examples() {
        let p3 = generators::path(3).unwrap().graph;
        assert_eq!(phase2(&p3, &VertexSet::new()), VertexSet::from([1]));
        assert!(phase2(&p3, &VertexSet::from([1])).is_empty());
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(phase2(&two, &VertexSet::new()), VertexSet::from([0, 2]));
        for v in two.vertices() {
            assert_eq!(dominator(&two, &VertexSet::new(), v), Some(if v < 2 { 0 } else { 2 }));
        }
    }

    #[test]
    fn lenzen_examples() {
        let star = generators::star(7).unwrap().graph;
        let res = modified_lenzen(&star, r(3)).unwrap();
        assert_eq!(res.dominating_set, VertexSet::from([0]));

        let grid = generators::grid(6, 6).unwrap().graph;
        let res = modified_lenzen(&grid, r(3)).unwrap();
        assert!(is_dominating(&grid, &res.dominating_set).unwrap());
        let gamma = oracle::domination_number(&grid, 36).unwrap();
        assert_eq!(gamma, 10);
        assert!(res.dominating_set.len() <= 199 * gamma);

        let c6 = generators::cycle(6).unwrap().graph;
        let res = modified_lenzen(&c6, r(3)).unwrap();
        assert!(is_dominating(&c6, &res.dominating_set).unwrap());
        assert!((2..=6).contains(&res.dominating_set.len()));
    }

    #[test]
    fn sequential_and_distributed_agree() {
        let mut graphs = vec![
            generators::star(7).unwrap().graph,
            generators::grid(6, 6).unwrap().graph,
            generators::cycle(6).unwrap().graph,
            generators::complete_bipartite(3, 7).unwrap().graph,
        ];
        for seed in 0..3 {
            graphs.push(generators::random_planar(30, seed).unwrap().graph);
            graphs.push(generators::random_tree(30, seed).unwrap().graph);
        }
        for g in &graphs {
            let seq = modified_lenzen(g, r(3)).unwrap();
            let dist = modified_lenzen_distributed(g, r(3)).unwrap();
            assert_eq!(seq, dist);
            assert_eq!(dist.rounds_used, LENZEN_ROUNDS);
            assert!(is_dominating(g, &seq.dominating_set).unwrap());
            let g0 = genus_algorithm(g, 0).unwrap();
            assert_eq!(g0.dominating_set, seq.dominating_set);
            assert!(g0.preprocessing_set.is_empty());
            assert_eq!(genus_algorithm_distributed(g, 0).unwrap(), g0);
        }
    }

    #[test]
    fn lenzen_is_five_local() {
        let g = generators::grid(8, 8).unwrap().graph;
        let prog = LenzenProgram::new(r(3)).unwrap();
        assert!(sim::audit_locality(&g, &prog, 0, 5, 10, 7).unwrap());
    }

    #[test]
    fn genus_on_k33() {
        let g = generators::complete_bipartite(3, 3).unwrap().graph;
        let res = genus_algorithm(&g, 1).unwrap();
        assert!(res.phase1_set.is_empty());
        assert_eq!(res.preprocessing_set, g.vertex_set());
        assert!(res.phase2_set.is_empty());
        assert_eq!(genus_algorithm_distributed(&g, 1).unwrap(), res);
        assert_eq!(res.rounds_used, 36);
        assert!(matches!(genus_algorithm(&g, -1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn genus_on_small_torus() {
        let g = generators::torus_grid(4, 4).unwrap().graph;
        for genus in 1..=2 {
            let res = genus_algorithm(&g, genus).unwrap();
            assert!(is_dominating(&g, &res.dominating_set).unwrap());
            assert_eq!(genus_algorithm_distributed(&g, genus).unwrap(), res);
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(approximation_bound(5, 3), 509);
        assert_eq!(approximation_bound(3, 3), 199);
        assert_eq!(genus_rounds(0), 6);
        assert_eq!(genus_rounds(2), 60);
    }
}
