//! Synchronous LOCAL-model simulation.
//!
//! Every active node runs one step per round on the messages delivered at
//! the end of the previous round. A step returns an outbox addressed to
//! neighbors and a halting flag; halted nodes keep their final state and no
//! longer run, but their last outbox is still delivered.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

/// A deterministic per-node program.
pub trait NodeProgram {
    type State: Clone;
    type Message: Clone;
    type Output: Clone;

    fn init(&self, id: VertexId, neighbors: &[VertexId]) -> Self::State;

    fn on_round(&self, state: &mut Self::State, inbox: &BTreeMap<VertexId, Self::Message>) -> Step<Self::Message>;

    fn output(&self, state: &Self::State) -> Self::Output;
}

#[derive(Clone, Debug)]
pub struct Step<M> {
    pub outbox: BTreeMap<VertexId, M>,
    pub halted: bool,
}

impl<M> Step<M> {
    pub fn send(outbox: BTreeMap<VertexId, M>) -> Self {
        Step { outbox, halted: false }
    }

    pub fn halt() -> Self {
        Step {
            outbox: BTreeMap::new(),
            halted: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTranscript<O> {
    pub outputs: BTreeMap<VertexId, O>,
    pub rounds_used: u32,
    pub messages_sent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimError<O> {
    RoundLimit {
        max_rounds: u32,
        partial: RunTranscript<O>,
    },
    InvalidRecipient {
        from: VertexId,
        to: VertexId,
    },
}

impl<O> From<SimError<O>> for Error {
    fn from(e: SimError<O>) -> Self {
        match e {
            SimError::RoundLimit { max_rounds, .. } => Error::RoundLimit(max_rounds),
            SimError::InvalidRecipient { from, to } => Error::InvalidRecipient { from, to },
        }
    }
}

/// `⌈log* n⌉` with base-2 logarithms.
pub fn log_star(n: usize) -> u32 {
    let mut x = n as f64;
    let mut k = 0;
    while x > 1.0 {
        x = libm::log2(x);
        k += 1;
    }
    k
}

/// `10 · (log* n + 20)`.
pub fn default_max_rounds(n: usize) -> u32 {
    10 * (log_star(n) + 20)
}

pub fn run<P: NodeProgram>(
    g: &Graph,
    prog: &P,
    max_rounds: u32,
) -> core::result::Result<RunTranscript<P::Output>, SimError<P::Output>> {
    let order: Vec<VertexId> = g.vertices().collect();
    run_in_order(g, prog, max_rounds, &order)
}

/// Like [`run`], stepping nodes within a round in the given order. The
/// result does not depend on the order.
pub fn run_in_order<P: NodeProgram>(
    g: &Graph,
    prog: &P,
    max_rounds: u32,
    order: &[VertexId],
) -> core::result::Result<RunTranscript<P::Output>, SimError<P::Output>> {
    let mut states: BTreeMap<VertexId, P::State> = BTreeMap::new();
    for &v in order {
        let neighbors: Vec<VertexId> = g.neighbors(v).iter().copied().collect();
        states.insert(v, prog.init(v, &neighbors));
    }
    let mut halted: BTreeMap<VertexId, bool> = g.vertices().map(|v| (v, false)).collect();
    let mut inboxes: BTreeMap<VertexId, BTreeMap<VertexId, P::Message>> = BTreeMap::new();
    let mut rounds = 0u32;
    let mut messages = 0u64;
    loop {
        let mut outboxes = Vec::new();
        for &v in order {
            if halted[&v] {
                continue;
            }
            let inbox = inboxes.remove(&v).unwrap_or_default();
            let step = prog.on_round(states.get_mut(&v).expect("state per vertex"), &inbox);
            for &to in step.outbox.keys() {
                if !g.has_edge(v, to) {
                    return Err(SimError::InvalidRecipient { from: v, to });
                }
            }
            messages += step.outbox.len() as u64;
            if step.halted {
                halted.insert(v, true);
            }
            outboxes.push((v, step.outbox));
        }
        if halted.values().all(|&h| h) {
            break;
        }
        inboxes.clear();
        for (from, outbox) in outboxes {
            for (to, msg) in outbox {
                inboxes.entry(to).or_default().insert(from, msg);
            }
        }
        rounds += 1;
        if rounds > max_rounds {
            return Err(SimError::RoundLimit {
                max_rounds,
                partial: transcript(prog, &states, max_rounds, messages),
            });
        }
    }
    Ok(transcript(prog, &states, rounds, messages))
}

fn transcript<P: NodeProgram>(
    prog: &P,
    states: &BTreeMap<VertexId, P::State>,
    rounds_used: u32,
    messages_sent: u64,
) -> RunTranscript<P::Output> {
    RunTranscript {
        outputs: states.iter().map(|(&v, s)| (v, prog.output(s))).collect(),
        rounds_used,
        messages_sent,
    }
}

/// Floods adjacency lists for `r` rounds; each node outputs `G[N^r[v]]`.
#[derive(Clone, Copy, Debug)]
pub struct GatherBall {
    pub radius: u32,
}

pub fn gather_ball_program(r: u32) -> GatherBall {
    GatherBall { radius: r }
}

/// Adjacency lists known to a node, keyed by vertex.
pub type Knowledge = BTreeMap<VertexId, VertexSet>;

#[derive(Clone, Debug)]
pub struct GatherState {
    pub id: VertexId,
    pub round: u32,
    pub known: Knowledge,
    fresh: Knowledge,
}

impl GatherState {
    /// The induced subgraph on the vertices whose lists are known.
    pub fn ball(&self) -> Graph {
        ball_from_knowledge(&self.known)
    }
}

pub fn ball_from_knowledge(known: &Knowledge) -> Graph {
    let mut g = Graph::new();
    for &v in known.keys() {
        g.add_vertex(v).expect("keys are unique");
    }
    for (&v, nbrs) in known {
        for &u in nbrs.range(v + 1..) {
            if known.contains_key(&u) {
                g.add_edge(v, u).expect("symmetric lists");
            }
        }
    }
    g
}

impl GatherBall {
    /// One flooding step: merge what arrived, then either halt (after
    /// `radius` exchanges) or forward the newly learned lists.
    pub fn step(&self, state: &mut GatherState, inbox: &BTreeMap<VertexId, Knowledge>) -> Step<Knowledge> {
        let mut fresh = core::mem::take(&mut state.fresh);
        for msg in inbox.values() {
            for (&v, nbrs) in msg {
                if !state.known.contains_key(&v) {
                    state.known.insert(v, nbrs.clone());
                    fresh.insert(v, nbrs.clone());
                }
            }
        }
        if state.round == self.radius {
            return Step::halt();
        }
        state.round += 1;
        let neighbors = state.known[&state.id].clone();
        Step::send(neighbors.into_iter().map(|u| (u, fresh.clone())).collect())
    }
}

impl NodeProgram for GatherBall {
    type State = GatherState;
    type Message = Knowledge;
    type Output = Graph;

    fn init(&self, id: VertexId, neighbors: &[VertexId]) -> GatherState {
        let own: Knowledge = BTreeMap::from([(id, neighbors.iter().copied().collect())]);
        GatherState {
            id,
            round: 0,
            known: own.clone(),
            fresh: own,
        }
    }

    fn on_round(&self, state: &mut GatherState, inbox: &BTreeMap<VertexId, Knowledge>) -> Step<Knowledge> {
        self.step(state, inbox)
    }

    fn output(&self, state: &GatherState) -> Graph {
        state.ball()
    }
}

/// Runs `prog` on `g` and on `perturbations` randomly edited copies, where
/// every edit avoids `N^r[v]`: removing or adding an edge between two
/// vertices outside the ball, or adding a fresh vertex (id above all
/// existing ones) joined to up to two outside vertices. Returns whether
/// `v`'s output stayed the same throughout.
pub fn audit_locality<P>(g: &Graph, prog: &P, v: VertexId, r: u32, perturbations: u32, seed: u64) -> Result<bool>
where
    P: NodeProgram,
    P::Output: PartialEq,
{
    let ball = g.ball(v, r as usize)?;
    let baseline = run(g, prog, default_max_rounds(g.n()))?.outputs[&v].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..perturbations {
        let mut h = g.clone();
        for _ in 0..rng.gen_range(1..=3) {
            perturb(&mut h, &ball, &mut rng);
        }
        let out = run(&h, prog, default_max_rounds(h.n()))?;
        if out.outputs[&v] != baseline {
            return Ok(false);
        }
    }
    Ok(true)
}

fn perturb(h: &mut Graph, ball: &VertexSet, rng: &mut ChaCha8Rng) {
    let outside: Vec<VertexId> = h.vertices().filter(|u| !ball.contains(u)).collect();
    let removable: Vec<(VertexId, VertexId)> = h
        .edges()
        .filter(|e| !ball.contains(&e.lo()) && !ball.contains(&e.hi()))
        .map(|e| (e.lo(), e.hi()))
        .collect();
    match rng.gen_range(0..3) {
        0 if !removable.is_empty() => {
            let &(a, b) = removable.choose(rng).unwrap();
            h.remove_edge(a, b).expect("listed edge");
        }
        1 if outside.len() >= 2 => {
            let a = *outside.choose(rng).unwrap();
            let b = *outside.choose(rng).unwrap();
            if a != b && !h.has_edge(a, b) {
                h.add_edge(a, b).expect("outside non-edge");
            }
        }
        _ => {
            let fresh = h.max_id().map_or(0, |m| m + 1);
            h.add_vertex(fresh).expect("fresh id");
            let k = rng.gen_range(0..=2.min(outside.len()));
            let mut pool = outside;
            pool.shuffle(rng);
            for &u in &pool[..k] {
                h.add_edge(fresh, u).expect("fresh vertex edge");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    struct HaltWithId;

    impl NodeProgram for HaltWithId {
        type State = VertexId;
        type Message = ();
        type Output = VertexId;

        fn init(&self, id: VertexId, _: &[VertexId]) -> VertexId {
            id
        }

        fn on_round(&self, _: &mut VertexId, _: &BTreeMap<VertexId, ()>) -> Step<()> {
            Step::halt()
        }

        fn output(&self, s: &VertexId) -> VertexId {
            *s
        }
    }

    /// Never halts; counts rounds.
    struct Forever;

    impl NodeProgram for Forever {
        type State = u32;
        type Message = ();
        type Output = u32;

        fn init(&self, _: VertexId, _: &[VertexId]) -> u32 {
            0
        }

        fn on_round(&self, s: &mut u32, _: &BTreeMap<VertexId, ()>) -> Step<()> {
            *s += 1;
            Step::send(BTreeMap::new())
        }

        fn output(&self, s: &u32) -> u32 {
            *s
        }
    }

    struct SendToStranger;

    impl NodeProgram for SendToStranger {
        type State = ();
        type Message = ();
        type Output = ();

        fn init(&self, _: VertexId, _: &[VertexId]) {}

        fn on_round(&self, _: &mut (), _: &BTreeMap<VertexId, ()>) -> Step<()> {
            Step::send(BTreeMap::from([(1000, ())]))
        }

        fn output(&self, _: &()) {}
    }

    #[test]
    fn immediate_halt() {
        let g = generators::cycle(5).unwrap().graph;
        let t = run(&g, &HaltWithId, 10).unwrap();
        assert_eq!(t.rounds_used, 0);
        assert_eq!(t.messages_sent, 0);
        assert!(t.outputs.iter().all(|(k, v)| k == v));
    }

    #[test]
    fn round_limit_carries_partial_transcript() {
        let g = generators::path(3).unwrap().graph;
        match run(&g, &Forever, 4) {
            Err(SimError::RoundLimit { max_rounds, partial }) => {
                assert_eq!(max_rounds, 4);
                assert_eq!(partial.outputs.len(), 3);
                assert!(partial.outputs.values().all(|&c| c == 5));
            }
            other => panic!("expected round limit, got {other:?}"),
        }
        assert_eq!(
            Error::from(run(&g, &SendToStranger, 4).unwrap_err()),
            Error::InvalidRecipient { from: 0, to: 1000 }
        );
    }

    #[test]
    fn gather_matches_balls() {
        let p3 = generators::path(3).unwrap().graph;
        let t = run(&p3, &gather_ball_program(1), 10).unwrap();
        assert_eq!(t.rounds_used, 1);
        assert_eq!(t.outputs[&0].vertex_set(), VertexSet::from([0, 1]));
        assert_eq!(t.outputs[&1].vertex_set(), VertexSet::from([0, 1, 2]));

        let p5 = generators::path(5).unwrap().graph;
        let t = run(&p5, &gather_ball_program(2), 10).unwrap();
        assert_eq!(t.rounds_used, 2);
        assert_eq!(t.outputs[&2], p5);

        let c6 = generators::cycle(6).unwrap().graph;
        let t = run(&c6, &gather_ball_program(2), 10).unwrap();
        for v in c6.vertices() {
            let ball = c6.ball(v, 2).unwrap();
            assert_eq!(t.outputs[&v], c6.induced(&ball));
            assert_eq!(t.outputs[&v].m(), 4);
        }

        let t = run(&c6, &gather_ball_program(0), 10).unwrap();
        assert_eq!(t.rounds_used, 0);
        assert!(t.outputs.iter().all(|(v, b)| b.vertex_set() == VertexSet::from([*v])));

        let tri = generators::cycle(3).unwrap().graph;
        let t = run(&tri, &gather_ball_program(1), 10).unwrap();
        assert!(t.outputs.values().all(|b| *b == tri));
    }

    #[test]
    fn gather_uses_exactly_r_rounds() {
        for seed in 0..4 {
            let g = generators::random_planar(30, seed).unwrap().graph;
            for r in 0..4 {
                let t = run(&g, &gather_ball_program(r), 100).unwrap();
                assert_eq!(t.rounds_used, r);
                for v in g.vertices() {
                    assert_eq!(t.outputs[&v], g.induced(&g.ball(v, r as usize).unwrap()));
                }
                // Every node sends to every neighbor in each of the r rounds.
                assert_eq!(t.messages_sent, 2 * g.m() as u64 * r as u64);
            }
        }
    }

    #[test]
    fn order_does_not_matter() {
        let g = generators::random_planar(25, 3).unwrap().graph;
        let prog = gather_ball_program(2);
        let base = run(&g, &prog, 50).unwrap();
        let mut order: Vec<VertexId> = g.vertices().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            order.shuffle(&mut rng);
            assert_eq!(run_in_order(&g, &prog, 50, &order).unwrap(), base);
        }
    }

    #[test]
    fn locality_audits() {
        let g = generators::grid(6, 6).unwrap().graph;
        assert!(audit_locality(&g, &gather_ball_program(1), 0, 1, 20, 1).unwrap());
        // P5: radius-2 output at an end vertex ignores edits outside N^1.
        let p5 = generators::path(5).unwrap().graph;
        assert!(audit_locality(&p5, &gather_ball_program(2), 0, 1, 30, 2).unwrap());
        // C5: deleting the far edge c-d changes a's 2-ball.
        let c5 = generators::cycle(5).unwrap().graph;
        assert!(!audit_locality(&c5, &gather_ball_program(2), 0, 1, 30, 2).unwrap());
        assert_eq!(
            audit_locality(&c5, &gather_ball_program(2), 7, 1, 1, 0),
            Err(Error::UnknownVertex(7))
        );
    }

    #[test]
    fn log_star_values() {
        assert_eq!(log_star(1), 0);
        assert_eq!(log_star(2), 1);
        assert_eq!(log_star(16), 3);
        assert_eq!(log_star(65536), 4);
        assert_eq!(default_max_rounds(1000), 240);
    }
}
