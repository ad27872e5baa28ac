//! Graph families and algorithm dispatch shared by `run` and `sweep`.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use localmds_core::cluster::ExpansionBound;
use localmds_core::generators::{self, genus_density_bound, Generated};
use localmds_core::lenzen::{self, MdsResult};
use localmds_core::minor::excluded_k3t_for_genus;
use localmds_core::oracle::{self, DEFAULT_ORACLE_CAP, MAX_ORACLE_CAP};
use localmds_core::ptas::{self, RefineParams};
use localmds_core::{Graph, Rational, VertexSet};

use crate::format::format_rational;

pub const ORACLE_CAP_VAR: &str = "LOCALMDS_ORACLE_CAP";

/// Exact-solver cap from `LOCALMDS_ORACLE_CAP`, default 25, at most 64.
pub fn oracle_cap() -> Result<usize> {
    match std::env::var(ORACLE_CAP_VAR) {
        Ok(s) => {
            let cap: usize = s.trim().parse().with_context(|| format!("{ORACLE_CAP_VAR}={s} is not a number"))?;
            Ok(cap.min(MAX_ORACLE_CAP))
        }
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

pub const FAMILIES: &[(&str, usize)] = &[
    ("grid", 2),
    ("torus", 2),
    ("complete-bipartite", 2),
    ("subdivided-clique", 2),
    ("random-planar", 1),
    ("random-planar-sparse", 2),
    ("path", 1),
    ("cycle", 1),
    ("star", 1),
    ("random-tree", 1),
];

pub fn generate(family: &str, params: &[usize], seed: u64) -> Result<Generated> {
    let Some(&(_, arity)) = FAMILIES.iter().find(|(f, _)| *f == family) else {
        bail!("unknown family `{family}`");
    };
    ensure!(params.len() == arity, "family `{family}` takes {arity} size parameter(s), got {}", params.len());
    let p = params;
    Ok(match family {
        "grid" => generators::grid(p[0], p[1]),
        "torus" => generators::torus_grid(p[0], p[1]),
        "complete-bipartite" => generators::complete_bipartite(p[0], p[1]),
        "subdivided-clique" => generators::subdivided_clique(p[0], p[1]),
        "random-planar" => generators::random_planar(p[0], seed),
        "random-planar-sparse" => generators::random_planar_sparse(p[0], seed, p[1] as u32),
        "path" => generators::path(p[0]),
        "cycle" => generators::cycle(p[0]),
        "star" => generators::star(p[0]),
        _ => generators::random_tree(p[0], seed),
    }?)
}

/// Parameters a sweep derives from one size value.
pub fn sweep_params(family: &str, size: usize) -> Result<Vec<usize>> {
    Ok(match family {
        "grid" | "torus" => vec![size, size],
        "complete-bipartite" => vec![3, size],
        "subdivided-clique" => vec![size, 1],
        "random-planar-sparse" => vec![size, 30],
        f if FAMILIES.iter().any(|(g, _)| *g == f) => vec![size],
        f => bail!("unknown family `{f}`"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    Lenzen,
    Genus,
    Ptas,
    GreedyBaseline,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Lenzen => "lenzen",
            Algorithm::Genus => "genus",
            Algorithm::Ptas => "ptas",
            Algorithm::GreedyBaseline => "greedy-baseline",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    #[default]
    Direct,
    Simulated,
}

/// A rational flag value such as `3` or `1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalArg(pub Rational);

impl FromStr for RationalArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        crate::format::parse_rational(s).map(RationalArg)
    }
}

#[derive(Clone, Debug)]
pub struct AlgoParams {
    pub c: Rational,
    pub genus: u32,
    pub epsilon: Rational,
    pub mode: Mode,
    pub refine: bool,
}

impl AlgoParams {
    pub fn describe(&self, algorithm: Algorithm) -> String {
        let mut parts = Vec::new();
        match algorithm {
            Algorithm::Lenzen => parts.push(format!("c={}", format_rational(self.c))),
            Algorithm::Genus => parts.push(format!("genus={}", self.genus)),
            Algorithm::Ptas => {
                parts.push(format!("c={}", format_rational(self.c)));
                parts.push(format!("genus={}", self.genus));
                parts.push(format!("epsilon={}", format_rational(self.epsilon)));
            }
            Algorithm::GreedyBaseline => {}
        }
        if self.refine && algorithm != Algorithm::Ptas {
            parts.push(format!("refine={}", format_rational(self.epsilon)));
        }
        parts.join(";")
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub set: VertexSet,
    pub stages: Option<MdsResult>,
    pub rounds: Option<u32>,
}

fn front_end(g: &Graph, p: &AlgoParams, genus_algorithm: bool) -> Result<MdsResult> {
    Ok(match (genus_algorithm, p.mode) {
        (false, Mode::Direct) => lenzen::modified_lenzen(g, p.c)?,
        (false, Mode::Simulated) => lenzen::modified_lenzen_distributed(g, p.c)?,
        (true, Mode::Direct) => lenzen::genus_algorithm(g, p.genus as i64)?,
        (true, Mode::Simulated) => lenzen::genus_algorithm_distributed(g, p.genus as i64)?,
    })
}

/// Refinement parameters for a front-end output on a genus-`g` input.
pub fn refine_params(p: &AlgoParams, genus_algorithm: bool) -> Result<RefineParams> {
    let t = excluded_k3t_for_genus(p.genus, true) as u64;
    let factor = if genus_algorithm {
        let c = genus_density_bound(p.genus) as u64;
        lenzen::approximation_bound(c, t) + 24 * p.genus as u64
    } else {
        let c = p.c.ceil().to_integer().max(1) as u64;
        lenzen::approximation_bound(c, t)
    };
    Ok(RefineParams {
        epsilon: p.epsilon,
        c: Rational::from(factor as i64),
        nabla1_bound: Rational::from(genus_density_bound(p.genus) as i64),
        expansion: ExpansionBound::genus(p.genus),
        cluster_cap: oracle_cap()?,
    })
}

pub fn run_algorithm(g: &Graph, algorithm: Algorithm, p: &AlgoParams) -> Result<RunOutcome> {
    let (mut outcome, genus_algorithm) = match algorithm {
        Algorithm::GreedyBaseline => (
            RunOutcome {
                set: oracle::greedy_mds(g),
                stages: None,
                rounds: None,
            },
            false,
        ),
        Algorithm::Lenzen | Algorithm::Genus | Algorithm::Ptas => {
            let genus_algorithm = algorithm == Algorithm::Genus || (algorithm == Algorithm::Ptas && p.genus > 0);
            let r = front_end(g, p, genus_algorithm)?;
            (
                RunOutcome {
                    set: r.dominating_set.clone(),
                    rounds: Some(r.rounds_used),
                    stages: Some(r),
                },
                genus_algorithm,
            )
        }
    };
    if algorithm == Algorithm::Ptas || (p.refine && algorithm != Algorithm::GreedyBaseline) {
        outcome.set = ptas::refine(g, &outcome.set, &refine_params(p, genus_algorithm)?)?;
    }
    Ok(outcome)
}

/// `|set| / γ(g)` when `g` is within the oracle cap.
pub fn ratio_if_solvable(g: &Graph, set: &VertexSet) -> Result<Option<(usize, Rational)>> {
    let cap = oracle_cap()?;
    if g.n() > cap {
        return Ok(None);
    }
    let gamma = oracle::domination_number(g, cap)?;
    let ratio = if gamma == 0 {
        Rational::from(1)
    } else {
        Rational::new(set.len() as i64, gamma as i64)
    };
    Ok(Some((gamma, ratio)))
}

/// `a..b` or `a..=b`, both inclusive.
pub fn parse_size_range(s: &str) -> Result<Vec<usize>> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .with_context(|| format!("size range `{s}` is not of the form a..b"))?;
    let a: usize = a.trim().parse().with_context(|| format!("bad range start in `{s}`"))?;
    let b: usize = b.trim().parse().with_context(|| format!("bad range end in `{s}`"))?;
    ensure!(a <= b, "empty size range `{s}`");
    Ok((a..=b).collect())
}
