//! First-order logic over ordered graphs.
//!
//! Atoms are `x = y`, `x < y` (id order) and `E(x, y)`. [`eval`] compiles a
//! formula and evaluates it with memoized quantifier nodes and two block
//! solvers: a set-cover search for `∃x̄ ∀y (A(y) → ⋁ Bᵢ(y, xᵢ))` and a
//! constraint search (with a matching test for all-distinct blocks) for
//! existential blocks over conjunctions. [`eval_naive`] is the textbook
//! recursion.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(String, String),
    Lt(String, String),
    Edge(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Eq(x.into(), y.into())
}

pub fn lt(x: &str, y: &str) -> Formula {
    Formula::Lt(x.into(), y.into())
}

pub fn edge(x: &str, y: &str) -> Formula {
    Formula::Edge(x.into(), y.into())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn exists(vars: &[&str], body: Formula) -> Formula {
    vars.iter()
        .rev()
        .fold(body, |f, v| Formula::Exists(v.to_string(), Box::new(f)))
}

pub fn forall(vars: &[&str], body: Formula) -> Formula {
    vars.iter()
        .rev()
        .fold(body, |f, v| Formula::Forall(v.to_string(), Box::new(f)))
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut atom = |a: &String, b: &String| {
            for v in [a, b] {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) | Formula::Edge(a, b) => atom(a, b),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of quantifiers.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Lt(..) | Formula::Edge(..) => 0,
            Formula::Not(f) => f.quantifier_count(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_count).sum(),
            Formula::Implies(a, b) => a.quantifier_count() + b.quantifier_count(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_count(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Lt(a, b) => write!(f, "(< {a} {b})"),
            Formula::Edge(a, b) => write!(f, "(E {a} {b})"),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(xs) | Formula::Or(xs) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Exists(v, x) => write!(f, "(exists {v} {x})"),
            Formula::Forall(v, x) => write!(f, "(forall {v} {x})"),
        }
    }
}

/// Parses the S-expression syntax: `(not F)`, `(and F…)`, `(or F…)`,
/// `(implies F G)`, `(exists x F)` or `(exists (x y …) F)`, `(forall …)`,
/// `(= x y)`, `(< x y)`, `(E x y)`.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { text, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::FormulaParse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn symbol(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(self.error("expected a symbol"));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn variables(&mut self) -> Result<Vec<String>> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let mut vars = Vec::new();
            while self.peek() != Some(')') {
                vars.push(self.symbol()?);
            }
            self.pos += 1;
            if vars.is_empty() {
                return Err(self.error("empty variable list"));
            }
            Ok(vars)
        } else {
            Ok(vec![self.symbol()?])
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        self.expect('(')?;
        let head_at = self.pos;
        let head = self.symbol()?;
        let f = match head.as_str() {
            "=" | "<" | "E" => {
                let a = self.symbol()?;
                let b = self.symbol()?;
                match head.as_str() {
                    "=" => Formula::Eq(a, b),
                    "<" => Formula::Lt(a, b),
                    _ => Formula::Edge(a, b),
                }
            }
            "not" => not(self.formula()?),
            "and" | "or" => {
                let mut parts = Vec::new();
                while self.peek() != Some(')') {
                    parts.push(self.formula()?);
                }
                if head == "and" {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
            "implies" => {
                let a = self.formula()?;
                implies(a, self.formula()?)
            }
            "exists" | "forall" => {
                let vars = self.variables()?;
                let body = self.formula()?;
                let names: Vec<&str> = vars.iter().map(String::as_str).collect();
                if head == "exists" {
                    exists(&names, body)
                } else {
                    forall(&names, body)
                }
            }
            _ => {
                self.pos = head_at;
                return Err(self.error(&format!("unknown operator `{head}`")));
            }
        };
        self.expect(')')?;
        Ok(f)
    }
}

fn check_env(g: &Graph, phi: &Formula, env: &BTreeMap<String, VertexId>) -> Result<()> {
    for v in phi.free_vars() {
        match env.get(&v) {
            None => return Err(Error::UnboundVariable(v)),
            Some(&id) => g.check_vertex(id)?,
        }
    }
    Ok(())
}

/// Textbook evaluation; exponential in quantifier depth.
pub fn eval_naive(g: &Graph, phi: &Formula, env: &BTreeMap<String, VertexId>) -> Result<bool> {
    check_env(g, phi, env)?;
    let verts: Vec<VertexId> = g.vertices().collect();
    Ok(naive(g, &verts, phi, &mut env.clone()))
}

fn naive(g: &Graph, verts: &[VertexId], phi: &Formula, env: &mut BTreeMap<String, VertexId>) -> bool {
    match phi {
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Lt(a, b) => env[a] < env[b],
        Formula::Edge(a, b) => g.has_edge(env[a], env[b]),
        Formula::Not(f) => !naive(g, verts, f, env),
        Formula::And(fs) => fs.iter().all(|f| naive(g, verts, f, env)),
        Formula::Or(fs) => fs.iter().any(|f| naive(g, verts, f, env)),
        Formula::Implies(a, b) => !naive(g, verts, a, env) || naive(g, verts, b, env),
        Formula::Exists(v, f) | Formula::Forall(v, f) => {
            let saved = env.get(v).copied();
            let want = matches!(phi, Formula::Exists(..));
            let mut result = !want;
            for &u in verts {
                env.insert(v.clone(), u);
                if naive(g, verts, f, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            result
        }
    }
}

/// `G ⊨ φ[env]`.
pub fn eval(g: &Graph, phi: &Formula, env: &BTreeMap<String, VertexId>) -> Result<bool> {
    check_env(g, phi, env)?;
    let mut ev = Evaluator::new(g, phi);
    let mut values = vec![UNBOUND; ev.names.len()];
    for (name, &id) in env {
        if let Some(i) = ev.names.iter().position(|n| n == name) {
            values[i] = ev.index_of(id);
        }
    }
    Ok(ev.eval(ev.root, &mut values))
}

/// `{ v : G ⊨ φ(v) }` for a formula with exactly one free variable.
pub fn defined_set(g: &Graph, phi: &Formula) -> Result<VertexSet> {
    let free = phi.free_vars();
    if free.len() != 1 {
        return Err(Error::FreeVariableCount(free.len()));
    }
    let var = free.into_iter().next().unwrap();
    let mut ev = Evaluator::new(g, phi);
    let slot = ev.names.iter().position(|n| *n == var).unwrap();
    let mut values = vec![UNBOUND; ev.names.len()];
    let mut out = VertexSet::new();
    for i in 0..ev.ids.len() {
        values[slot] = i as u32;
        if ev.eval(ev.root, &mut values) {
            out.insert(ev.ids[i]);
        }
    }
    Ok(out)
}

const UNBOUND: u32 = u32::MAX;

type NodeId = usize;
type Var = usize;

#[derive(Clone, Debug)]
enum Node {
    Eq(Var, Var),
    Lt(Var, Var),
    Edge(Var, Var),
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Implies(NodeId, NodeId),
    /// A maximal run of nested existentials over distinct variables.
    Exists(Vec<Var>, NodeId),
    Forall(Vec<Var>, NodeId),
}

struct Evaluator {
    ids: Vec<VertexId>,
    adj: Vec<Vec<bool>>,
    names: Vec<String>,
    nodes: Vec<Node>,
    free: Vec<Vec<Var>>,
    root: NodeId,
    memo: BTreeMap<(NodeId, u32, u32), bool>,
    /// Parsed shape of existential blocks, computed on first use.
    plans: BTreeMap<NodeId, Plan>,
}

#[derive(Clone)]
enum Plan {
    Cover(CoverShape),
    Csp(CspShape),
}

#[derive(Clone)]
struct CoverShape {
    y: Var,
    guard: NodeId,
    /// Disjuncts grouped by the single block variable they mention.
    by_var: Vec<(Var, Vec<NodeId>)>,
    /// Disjuncts mentioning no block variable.
    fixed: Vec<NodeId>,
}

#[derive(Clone)]
struct CspShape {
    ground: Vec<NodeId>,
    unary: Vec<(Var, NodeId)>,
    distinct: Vec<(Var, Var)>,
    other: Vec<(Vec<Var>, NodeId)>,
}

impl Evaluator {
    fn new(g: &Graph, phi: &Formula) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let adj = ids
            .iter()
            .map(|&a| ids.iter().map(|&b| g.has_edge(a, b)).collect())
            .collect();
        let mut ev = Evaluator {
            ids,
            adj,
            names: Vec::new(),
            nodes: Vec::new(),
            free: Vec::new(),
            root: 0,
            memo: BTreeMap::new(),
            plans: BTreeMap::new(),
        };
        ev.root = ev.compile(phi);
        ev
    }

    fn index_of(&self, id: VertexId) -> u32 {
        self.ids.binary_search(&id).expect("checked vertex") as u32
    }

    fn var(&mut self, name: &str) -> Var {
        match self.names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    fn push(&mut self, node: Node, free: BTreeSet<Var>) -> NodeId {
        self.nodes.push(node);
        self.free.push(free.into_iter().collect());
        self.nodes.len() - 1
    }

    fn free_of(&self, ids: &[NodeId]) -> BTreeSet<Var> {
        ids.iter().flat_map(|&i| self.free[i].iter().copied()).collect()
    }

    fn compile(&mut self, phi: &Formula) -> NodeId {
        match phi {
            Formula::Eq(a, b) | Formula::Lt(a, b) | Formula::Edge(a, b) => {
                let (x, y) = (self.var(a), self.var(b));
                let node = match phi {
                    Formula::Eq(..) => Node::Eq(x, y),
                    Formula::Lt(..) => Node::Lt(x, y),
                    _ => Node::Edge(x, y),
                };
                self.push(node, BTreeSet::from([x, y]))
            }
            Formula::Not(f) => {
                let c = self.compile(f);
                let free = self.free_of(&[c]);
                self.push(Node::Not(c), free)
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let mut parts = Vec::new();
                for f in fs {
                    let c = self.compile(f);
                    // Flatten nested connectives of the same kind.
                    match (&self.nodes[c], phi) {
                        (Node::And(inner), Formula::And(_)) | (Node::Or(inner), Formula::Or(_)) => {
                            parts.extend(inner.clone())
                        }
                        _ => parts.push(c),
                    }
                }
                let free = self.free_of(&parts);
                let node = if matches!(phi, Formula::And(_)) {
                    Node::And(parts)
                } else {
                    Node::Or(parts)
                };
                self.push(node, free)
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.compile(a), self.compile(b));
                let free = self.free_of(&[x, y]);
                self.push(Node::Implies(x, y), free)
            }
            Formula::Exists(..) | Formula::Forall(..) => {
                let is_exists = matches!(phi, Formula::Exists(..));
                let mut vars = Vec::new();
                let mut body = phi;
                loop {
                    match (body, is_exists) {
                        (Formula::Exists(v, f), true) | (Formula::Forall(v, f), false) => {
                            let id = self.var(v);
                            if vars.contains(&id) {
                                break;
                            }
                            vars.push(id);
                            body = f;
                        }
                        _ => break,
                    }
                }
                let c = self.compile(body);
                let mut free = self.free_of(&[c]);
                for v in &vars {
                    free.remove(v);
                }
                let node = if is_exists {
                    Node::Exists(vars, c)
                } else {
                    Node::Forall(vars, c)
                };
                self.push(node, free)
            }
        }
    }

    fn eval(&mut self, id: NodeId, env: &mut Vec<u32>) -> bool {
        match &self.nodes[id] {
            &Node::Eq(a, b) => env[a] == env[b],
            &Node::Lt(a, b) => env[a] < env[b],
            &Node::Edge(a, b) => self.adj[env[a] as usize][env[b] as usize],
            &Node::Not(f) => !self.eval(f, env),
            Node::And(parts) => {
                let parts = parts.clone();
                parts.into_iter().all(|p| self.eval(p, env))
            }
            Node::Or(parts) => {
                let parts = parts.clone();
                parts.into_iter().any(|p| self.eval(p, env))
            }
            &Node::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Node::Exists(..) | Node::Forall(..) => {
                let free = &self.free[id];
                let key = match free.len() {
                    0 => Some((id, UNBOUND, UNBOUND)),
                    1 => Some((id, env[free[0]], UNBOUND)),
                    2 => Some((id, env[free[0]], env[free[1]])),
                    _ => None,
                };
                if let Some(k) = key {
                    if let Some(&hit) = self.memo.get(&k) {
                        return hit;
                    }
                }
                let result = match self.nodes[id].clone() {
                    Node::Exists(vars, body) => self.exists(id, &vars, body, env),
                    Node::Forall(vars, body) => !self.search_naive(&vars, body, false, env),
                    _ => unreachable!(),
                };
                if let Some(k) = key {
                    self.memo.insert(k, result);
                }
                result
            }
        }
    }

    /// Is there an assignment of `vars` making `body` evaluate to `want`?
    fn search_naive(&mut self, vars: &[Var], body: NodeId, want: bool, env: &mut Vec<u32>) -> bool {
        let Some((&v, rest)) = vars.split_first() else {
            return self.eval(body, env) == want;
        };
        let saved = env[v];
        let mut found = false;
        for x in 0..self.ids.len() as u32 {
            env[v] = x;
            if self.search_naive(rest, body, want, env) {
                found = true;
                break;
            }
        }
        env[v] = saved;
        found
    }

    fn exists(&mut self, id: NodeId, vars: &[Var], body: NodeId, env: &mut Vec<u32>) -> bool {
        if self.ids.is_empty() {
            return false;
        }
        let plan = match self.plans.get(&id) {
            Some(p) => p.clone(),
            None => {
                let p = self.plan(vars, body);
                self.plans.insert(id, p.clone());
                p
            }
        };
        let saved: Vec<u32> = vars.iter().map(|&v| env[v]).collect();
        let result = match &plan {
            Plan::Cover(shape) => self.solve_cover(vars, shape, env),
            Plan::Csp(shape) => self.solve_csp(vars, shape, env),
        };
        for (&v, s) in vars.iter().zip(saved) {
            env[v] = s;
        }
        result
    }

    fn plan(&self, vars: &[Var], body: NodeId) -> Plan {
        if let Some(shape) = self.cover_shape(vars, body) {
            return Plan::Cover(shape);
        }
        let conjuncts = match &self.nodes[body] {
            Node::And(parts) => parts.clone(),
            _ => vec![body],
        };
        let mut shape = CspShape {
            ground: Vec::new(),
            unary: Vec::new(),
            distinct: Vec::new(),
            other: Vec::new(),
        };
        for c in conjuncts {
            let mine: Vec<Var> = self.free[c].iter().copied().filter(|v| vars.contains(v)).collect();
            match mine.len() {
                0 => shape.ground.push(c),
                1 => shape.unary.push((mine[0], c)),
                _ => match &self.nodes[c] {
                    &Node::Not(inner) if mine.len() == 2 && matches!(self.nodes[inner], Node::Eq(..)) => {
                        shape.distinct.push((mine[0], mine[1]))
                    }
                    _ => shape.other.push((mine, c)),
                },
            }
        }
        Plan::Csp(shape)
    }

    /// Recognizes `∀y (A → ⋁ Bⱼ)` where `A` mentions no block variable and
    /// each `Bⱼ` at most one.
    fn cover_shape(&self, vars: &[Var], body: NodeId) -> Option<CoverShape> {
        let Node::Forall(ys, inner) = &self.nodes[body] else {
            return None;
        };
        let [y] = ys[..] else {
            return None;
        };
        if vars.contains(&y) {
            return None;
        }
        let &Node::Implies(guard, concl) = &self.nodes[*inner] else {
            return None;
        };
        if self.free[guard].iter().any(|v| vars.contains(v)) {
            return None;
        }
        let disjuncts = match &self.nodes[concl] {
            Node::Or(parts) => parts.clone(),
            _ => vec![concl],
        };
        let mut by_var: Vec<(Var, Vec<NodeId>)> = Vec::new();
        let mut fixed = Vec::new();
        for d in disjuncts {
            let mine: Vec<Var> = self.free[d].iter().copied().filter(|v| vars.contains(v)).collect();
            match mine[..] {
                [] => fixed.push(d),
                [x] => match by_var.iter_mut().find(|(v, _)| *v == x) {
                    Some((_, ds)) => ds.push(d),
                    None => by_var.push((x, vec![d])),
                },
                _ => return None,
            }
        }
        Some(CoverShape { y, guard, by_var, fixed })
    }

    fn solve_cover(&mut self, _vars: &[Var], shape: &CoverShape, env: &mut Vec<u32>) -> bool {
        let n = self.ids.len() as u32;
        let saved_y = env[shape.y];
        // Vertices y that must be covered by some block variable.
        let mut targets = Vec::new();
        for y in 0..n {
            env[shape.y] = y;
            if self.eval(shape.guard, env) && !shape.fixed.iter().any(|&d| self.eval(d, env)) {
                targets.push(y);
            }
        }
        if targets.is_empty() {
            env[shape.y] = saved_y;
            return true;
        }
        let words = targets.len().div_ceil(64);
        // covers[i][w]: targets covered when block variable i takes value w.
        let mut covers: Vec<Vec<Vec<u64>>> = Vec::new();
        for (x, ds) in shape.by_var.clone() {
            let saved_x = env[x];
            let mut per_value = Vec::with_capacity(n as usize);
            for w in 0..n {
                env[x] = w;
                let mut bits = vec![0u64; words];
                for (k, &y) in targets.iter().enumerate() {
                    env[shape.y] = y;
                    if ds.iter().any(|&d| self.eval(d, env)) {
                        bits[k / 64] |= 1 << (k % 64);
                    }
                }
                per_value.push(bits);
            }
            env[x] = saved_x;
            covers.push(per_value);
        }
        env[shape.y] = saved_y;
        // Variables with identical tables are interchangeable.
        let class: Vec<usize> = (0..covers.len())
            .map(|i| (0..i).find(|&j| covers[j] == covers[i]).unwrap_or(i))
            .collect();
        let mut uncovered = vec![0u64; words];
        for k in 0..targets.len() {
            uncovered[k / 64] |= 1 << (k % 64);
        }
        let mut used = vec![false; covers.len()];
        cover_search(&covers, &class, &mut used, &mut uncovered)
    }

    fn solve_csp(&mut self, vars: &[Var], shape: &CspShape, env: &mut Vec<u32>) -> bool {
        for &g in &shape.ground {
            if !self.eval(g, env) {
                return false;
            }
        }
        let n = self.ids.len() as u32;
        let mut domains: Vec<Vec<u32>> = Vec::with_capacity(vars.len());
        for &v in vars {
            let checks: Vec<NodeId> = shape.unary.iter().filter(|(u, _)| *u == v).map(|&(_, c)| c).collect();
            let mut dom = Vec::new();
            for x in 0..n {
                env[v] = x;
                if checks.iter().all(|&c| self.eval(c, env)) {
                    dom.push(x);
                }
            }
            if dom.is_empty() {
                return false;
            }
            domains.push(dom);
        }
        let pos = |v: Var| vars.iter().position(|&u| u == v).unwrap();
        let k = vars.len();
        let mut differ = vec![vec![false; k]; k];
        for &(a, b) in &shape.distinct {
            let (i, j) = (pos(a), pos(b));
            differ[i][j] = true;
            differ[j][i] = true;
        }
        let all_distinct = (0..k).all(|i| (0..k).all(|j| i == j || differ[i][j]));
        if shape.other.is_empty() && all_distinct {
            return has_distinct_representatives(&domains, n as usize);
        }
        let others: Vec<(Vec<usize>, NodeId)> = shape
            .other
            .iter()
            .map(|(vs, c)| (vs.iter().map(|&v| pos(v)).collect(), *c))
            .collect();
        let mut assigned = vec![UNBOUND; k];
        self.csp_search(vars, &domains, &differ, &others, &mut assigned, env)
    }

    fn csp_search(
        &mut self,
        vars: &[Var],
        domains: &[Vec<u32>],
        differ: &[Vec<bool>],
        others: &[(Vec<usize>, NodeId)],
        assigned: &mut Vec<u32>,
        env: &mut Vec<u32>,
    ) -> bool {
        let allowed = |i: usize, x: u32, assigned: &[u32]| {
            (0..assigned.len()).all(|j| !(differ[i][j] && assigned[j] == x))
        };
        // Most constrained unassigned variable.
        let mut best: Option<(usize, usize)> = None;
        for i in 0..vars.len() {
            if assigned[i] != UNBOUND {
                continue;
            }
            let count = domains[i].iter().filter(|&&x| allowed(i, x, assigned)).count();
            if count == 0 {
                return false;
            }
            if best.is_none_or(|(_, c)| count < c) {
                best = Some((i, count));
            }
        }
        let Some((i, _)) = best else {
            return true;
        };
        for &x in &domains[i] {
            if !allowed(i, x, assigned) {
                continue;
            }
            assigned[i] = x;
            env[vars[i]] = x;
            let ok = others.iter().all(|(vs, c)| {
                !vs.contains(&i) || vs.iter().any(|&j| assigned[j] == UNBOUND) || self.eval(*c, env)
            });
            if ok && self.csp_search(vars, domains, differ, others, assigned, env) {
                return true;
            }
            assigned[i] = UNBOUND;
        }
        false
    }
}

fn cover_search(covers: &[Vec<Vec<u64>>], class: &[usize], used: &mut Vec<bool>, uncovered: &mut Vec<u64>) -> bool {
    let left: u32 = uncovered.iter().map(|w| w.count_ones()).sum();
    if left == 0 {
        return true;
    }
    let free: Vec<usize> = (0..covers.len()).filter(|&i| !used[i]).collect();
    if free.is_empty() {
        return false;
    }
    let gain = |bits: &Vec<u64>, unc: &Vec<u64>| -> u32 { bits.iter().zip(unc).map(|(a, b)| (a & b).count_ones()).sum() };
    let best: u32 = free
        .iter()
        .map(|&i| covers[i].iter().map(|b| gain(b, uncovered)).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    if best == 0 || (left.div_ceil(best) as usize) > free.len() {
        return false;
    }
    // Uncovered target with the fewest (variable, value) options.
    let words = uncovered.len();
    let mut pick = None;
    let mut fewest = usize::MAX;
    for k in 0..words * 64 {
        if uncovered[k / 64] >> (k % 64) & 1 == 0 {
            continue;
        }
        let count: usize = free
            .iter()
            .map(|&i| covers[i].iter().filter(|b| b[k / 64] >> (k % 64) & 1 == 1).count())
            .sum();
        if count < fewest {
            fewest = count;
            pick = Some(k);
        }
    }
    let k = pick.unwrap();
    // One representative per class of interchangeable free variables.
    let reps: Vec<usize> = free
        .iter()
        .copied()
        .filter(|&i| !free.iter().any(|&j| j < i && class[j] == class[i]))
        .collect();
    for i in reps {
        for bits in &covers[i] {
            if bits[k / 64] >> (k % 64) & 1 == 0 {
                continue;
            }
            let saved = uncovered.clone();
            for (u, b) in uncovered.iter_mut().zip(bits) {
                *u &= !b;
            }
            used[i] = true;
            if cover_search(covers, class, used, uncovered) {
                return true;
            }
            used[i] = false;
            *uncovered = saved;
        }
    }
    false
}

/// Hall's condition via augmenting paths: can every variable take a
/// distinct value from its domain?
fn has_distinct_representatives(domains: &[Vec<u32>], n: usize) -> bool {
    if domains.len() > n {
        return false;
    }
    let mut owner = vec![usize::MAX; n];
    for i in 0..domains.len() {
        let mut seen = vec![false; n];
        if !augment(i, domains, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(i: usize, domains: &[Vec<u32>], owner: &mut Vec<usize>, seen: &mut Vec<bool>) -> bool {
    for &x in &domains[i] {
        let x = x as usize;
        if seen[x] {
            continue;
        }
        seen[x] = true;
        if owner[x] == usize::MAX || augment(owner[x], domains, owner, seen) {
            owner[x] = i;
            return true;
        }
    }
    false
}

/// `x ∈ N[y]`.
fn closed_adj(x: &str, y: &str) -> Formula {
    Formula::Or(vec![edge(x, y), eq(x, y)])
}

/// `φ_D(x)`: no `2c` vertices other than `x` dominate `N(x)`.
///
/// `¬∃x₁…x₂c ∀y (E(x,y) → ⋁ᵢ ((E(y,xᵢ) ∨ y = xᵢ) ∧ xᵢ ≠ x))`
pub fn build_phi_d(c: u32) -> Formula {
    phi_d_at(c, "x")
}

fn phi_d_at(c: u32, x: &str) -> Formula {
    let names: Vec<String> = (1..=2 * c).map(|i| format!("d{i}")).collect();
    let disjuncts = names
        .iter()
        .map(|xi| Formula::And(vec![closed_adj("dy", xi), not(eq(xi, x))]))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    not(exists(
        &refs,
        forall(&["dy"], implies(edge(x, "dy"), Formula::Or(disjuncts))),
    ))
}

/// `4c + 2c(t − 1)`.
pub fn residual_threshold(c: u32, t: u32) -> u32 {
    4 * c + 2 * c * (t - 1)
}

/// `z ∉ N[D]`.
fn undominated(c: u32, z: &str) -> Formula {
    forall(&["u"], implies(phi_d_at(c, "u"), not(closed_adj(z, "u"))))
}

/// More than `threshold` undominated vertices in `N[w]`.
fn high(c: u32, threshold: u32, w: &str) -> Formula {
    let zs: Vec<String> = (1..=threshold + 1).map(|j| format!("z{j}")).collect();
    let mut parts = Vec::new();
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            parts.push(not(eq(&zs[i], &zs[j])));
        }
    }
    for z in &zs {
        parts.push(closed_adj(z, w));
        parts.push(undominated(c, z));
    }
    let refs: Vec<&str> = zs.iter().map(String::as_str).collect();
    exists(&refs, Formula::And(parts))
}

/// `ψ_D′(x)`: some undominated `y ∈ N[x]` elects `x`. `y` elects the
/// least member of `N[y]` with more than `4c + 2c(t−1)` undominated closed
/// neighbors, or the least member of `N[y]` when there is none.
pub fn build_psi_dprime(c: u32, t: u32) -> Formula {
    let threshold = residual_threshold(c, t);
    let high_x = high(c, threshold, "x");
    let high_w = high(c, threshold, "w");
    let elect_high = Formula::And(vec![
        high_x,
        forall(
            &["w"],
            implies(Formula::And(vec![closed_adj("w", "y"), high_w.clone()]), not(lt("w", "x"))),
        ),
    ]);
    let elect_least = Formula::And(vec![
        not(exists(&["w"], Formula::And(vec![closed_adj("w", "y"), high_w]))),
        forall(&["w"], implies(closed_adj("w", "y"), not(lt("w", "x")))),
    ]);
    exists(
        &["y"],
        Formula::And(vec![
            closed_adj("x", "y"),
            undominated(c, "y"),
            Formula::Or(vec![elect_high, elect_least]),
        ]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::lenzen;
    use crate::oracle::is_dominating;
    use crate::Rational;

    fn env(pairs: &[(&str, VertexId)]) -> BTreeMap<String, VertexId> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn basic_evaluation() {
        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(eval(&e, &edge("x", "y"), &env(&[("x", 0), ("y", 1)])).unwrap());
        let mut iso = e.clone();
        iso.add_vertex(2).unwrap();
        let total = forall(&["x"], exists(&["y"], edge("x", "y")));
        assert!(eval(&e, &total, &env(&[])).unwrap());
        assert!(!eval(&iso, &total, &env(&[])).unwrap());
        let p3 = generators::path(3).unwrap().graph;
        let f = parse("(exists y (and (E x y) (forall z (implies (E y z) (or (= z x) (E z x))))))").unwrap();
        assert!(eval(&p3, &f, &env(&[("x", 1)])).unwrap());
        assert!(eval_naive(&p3, &f, &env(&[("x", 1)])).unwrap());
        assert_eq!(eval(&p3, &f, &env(&[])), Err(Error::UnboundVariable("x".into())));
        assert_eq!(eval(&p3, &f, &env(&[("x", 9)])), Err(Error::UnknownVertex(9)));
    }

    #[test]
    fn defined_sets() {
        let g = generators::random_planar(12, 1).unwrap().graph;
        assert_eq!(defined_set(&g, &eq("x", "x")).unwrap(), g.vertex_set());
        assert_eq!(defined_set(&g, &edge("x", "y")), Err(Error::FreeVariableCount(2)));
        let star = generators::star(7).unwrap().graph;
        assert_eq!(defined_set(&star, &build_phi_d(3)).unwrap(), VertexSet::from([0]));
        let tri = generators::cycle(3).unwrap().graph;
        assert!(defined_set(&tri, &build_phi_d(3)).unwrap().is_empty());
        let grid = generators::grid(6, 6).unwrap().graph;
        assert!(defined_set(&grid, &build_phi_d(3)).unwrap().is_empty());
    }

    #[test]
    fn phi_d_structure() {
        let f = build_phi_d(3);
        assert_eq!(f.quantifier_count(), 7);
        assert_eq!(f.free_vars(), BTreeSet::from(["x".to_string()]));
        let psi = build_psi_dprime(3, 3);
        assert_eq!(psi.free_vars(), BTreeSet::from(["x".to_string()]));
        assert_eq!(residual_threshold(3, 3), 24);
    }

    #[test]
    fn phi_d_matches_phase1() {
        let mut graphs = vec![
            generators::star(9).unwrap().graph,
            generators::complete_bipartite(3, 7).unwrap().graph,
            generators::subdivided_clique(6, 0).unwrap().graph,
        ];
        for seed in 0..4 {
            graphs.push(generators::random_planar(40, seed).unwrap().graph);
        }
        for g in &graphs {
            for c in 1..=3u32 {
                assert_eq!(
                    defined_set(g, &build_phi_d(c)).unwrap(),
                    lenzen::phase1(g, Rational::from(c as i64)).unwrap()
                );
            }
        }
    }

    #[test]
    fn psi_examples() {
        let p3 = generators::path(3).unwrap().graph;
        assert_eq!(defined_set(&p3, &build_psi_dprime(3, 3)).unwrap(), VertexSet::from([0, 1]));
        let star = generators::star(7).unwrap().graph;
        assert!(defined_set(&star, &build_psi_dprime(3, 3)).unwrap().is_empty());
        // Small thresholds exercise the high-degree branch.
        let g = generators::random_planar(30, 2).unwrap().graph;
        for (c, t) in [(1, 3), (3, 3)] {
            let d = defined_set(&g, &build_phi_d(c)).unwrap();
            let d2 = defined_set(&g, &build_psi_dprime(c, t)).unwrap();
            let all: VertexSet = d.union(&d2).copied().collect();
            assert!(is_dominating(&g, &all).unwrap());
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for f in [build_phi_d(2), build_psi_dprime(1, 3), parse("(and)").unwrap()] {
            assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
        assert_eq!(
            parse("(exists (a b) (E a b))").unwrap(),
            exists(&["a", "b"], edge("a", "b"))
        );
        assert!(matches!(parse("(foo x)"), Err(Error::FormulaParse { offset: 1, .. })));
        assert!(matches!(parse("(E x y"), Err(Error::FormulaParse { .. })));
        assert!(matches!(parse("(E x y) z"), Err(Error::FormulaParse { .. })));
    }
}
