//! Command-line interface. Each subcommand renders its report to a string.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use localmds_core::cluster::{cluster, crossing_weight, ExpansionBound};
use localmds_core::fo;
use localmds_core::oracle::is_dominating;
use localmds_core::Rational;

use crate::format::{format_rational, format_vertex_set, parse_rational, parse_vertex_set, read_graph, write_graph};
use crate::runner::{generate, parse_size_range, ratio_if_solvable, run_algorithm, AlgoParams, Algorithm, Mode, RationalArg};
use crate::sweep::{run_sweep, write_csv, SweepConfig};

const FORMULA_HELP: &str = "Formula syntax: (= x y), (< x y), (E x y), (not F), (and F ...), (or F ...), \
(implies F G), (exists x F), (exists (x y) F), (forall ...). The formula must have exactly one free variable.";

#[derive(Debug, Parser)]
#[command(name = "localmds", version, about = "Constant-round dominating set approximation in the LOCAL model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct AlgoArgs {
    /// Phase-1 density parameter
    #[arg(long, default_value = "3")]
    pub c: RationalArg,
    /// Genus bound for the genus algorithm and the refinement presets
    #[arg(long, default_value_t = 0)]
    pub genus: u32,
    /// Refinement accuracy
    #[arg(long, default_value = "1/2")]
    pub epsilon: RationalArg,
    #[arg(long, value_enum, default_value_t = Mode::Direct)]
    pub mode: Mode,
    /// Chain the output into the (1+epsilon) refinement
    #[arg(long)]
    pub refine: bool,
}

impl AlgoArgs {
    fn params(&self) -> AlgoParams {
        AlgoParams {
            c: self.c.0,
            genus: self.genus,
            epsilon: self.epsilon.0,
            mode: self.mode,
            refine: self.refine,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    PhiD,
    PsiDprime,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph: grid W H, torus W H, complete-bipartite M N,
    /// subdivided-clique N S, random-planar N, random-planar-sparse N DROP%,
    /// path N, cycle N, star LEAVES, random-tree N
    Generate {
        family: String,
        params: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when absent
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm and print its summary
    Run {
        #[arg(value_enum)]
        algorithm: Algorithm,
        graph: PathBuf,
        #[command(flatten)]
        args: AlgoArgs,
    },
    /// Check that a vertex set dominates, with its ratio when solvable
    Verify { graph: PathBuf, set: PathBuf },
    /// Cluster a graph and check the partition invariants
    Cluster {
        graph: PathBuf,
        #[arg(long)]
        epsilon: RationalArg,
        /// planar, genus:K, constant:P/Q or table:A,B,...
        #[arg(long, default_value = "planar")]
        preset: String,
    },
    /// Print the set defined by a formula with one free variable
    #[command(after_help = FORMULA_HELP)]
    EvalFo {
        graph: PathBuf,
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        formula: Option<PathBuf>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        #[arg(long, default_value_t = 3)]
        c: u32,
        #[arg(long, default_value_t = 3)]
        t: u32,
    },
    /// Run an algorithm over a family and size range (inclusive) and emit CSV
    Sweep {
        family: String,
        sizes: String,
        #[arg(value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        args: AlgoArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when absent
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

pub fn parse_preset(s: &str) -> Result<ExpansionBound> {
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    Ok(match name {
        "planar" => ExpansionBound::planar(),
        "genus" => ExpansionBound::genus(arg.parse().with_context(|| format!("bad genus in preset `{s}`"))?),
        "constant" => ExpansionBound::Constant(parse_rational(arg).map_err(anyhow::Error::msg)?),
        "table" => ExpansionBound::Table(
            arg.split(',')
                .map(parse_rational)
                .collect::<Result<Vec<Rational>, String>>()
                .map_err(anyhow::Error::msg)?,
        ),
        _ => bail!("unknown expansion preset `{s}`"),
    })
}

/// Text for stdout and, when an invariant check failed, the diagnostic.
#[derive(Debug, Default)]
pub struct Report {
    pub text: String,
    pub failure: Option<String>,
}

/// Executes a command.
pub fn execute(command: &Command) -> Result<Report> {
    let mut out = String::new();
    let mut failure = None;
    match command {
        Command::Generate { family, params, seed, out: path } => {
            let generated = generate(family, params, *seed)?;
            let metadata: Vec<(String, String)> = generated
                .info
                .entries()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .chain([("seed".to_string(), seed.to_string())])
                .collect();
            let text = write_graph(&generated.graph, &metadata)?;
            match path {
                Some(p) => {
                    std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
                    writeln!(out, "wrote {} (n={} m={})", p.display(), generated.graph.n(), generated.graph.m())?;
                }
                None => out.push_str(&text),
            }
        }
        Command::Run { algorithm, graph, args } => {
            let g = read_graph(graph)?.graph;
            let params = args.params();
            let outcome = run_algorithm(&g, *algorithm, &params)?;
            let dominating = is_dominating(&g, &outcome.set)?;
            write!(out, "algorithm={algorithm} params={} n={} m={} size={}", params.describe(*algorithm), g.n(), g.m(), outcome.set.len())?;
            if let Some(s) = &outcome.stages {
                write!(
                    out,
                    " phase1={} preprocessing={} phase2={}",
                    s.phase1_set.len(),
                    s.preprocessing_set.len(),
                    s.phase2_set.len()
                )?;
            }
            if let Some(r) = outcome.rounds {
                write!(out, " rounds={r}")?;
            }
            writeln!(out, " dominating={dominating}")?;
            writeln!(out, "set={}", format_vertex_set(&outcome.set))?;
            if !dominating {
                failure = Some("output does not dominate the graph".to_string());
            }
        }
        Command::Verify { graph, set } => {
            let g = read_graph(graph)?.graph;
            let text = std::fs::read_to_string(set).with_context(|| format!("reading {}", set.display()))?;
            let s = parse_vertex_set(&text)?;
            let dominating = is_dominating(&g, &s)?;
            let ratio = if dominating {
                ratio_if_solvable(&g, &s)?.map_or("NA".to_string(), |(_, r)| format_rational(r))
            } else {
                "NA".to_string()
            };
            writeln!(out, "dominating={dominating} ratio={ratio}")?;
            if !dominating {
                failure = Some("set does not dominate the graph".to_string());
            }
        }
        Command::Cluster { graph, epsilon, preset } => {
            let g = read_graph(graph)?.graph;
            let bound = parse_preset(preset)?;
            let partition = cluster(&g, epsilon.0, &bound)?;
            let worst = partition
                .validate(&g)
                .map_err(|d| anyhow::anyhow!("cluster partition invalid: {d:?}"))?;
            let crossing = crossing_weight(&g, &partition.clusters);
            let target = epsilon.0 * g.total_edge_weight();
            writeln!(
                out,
                "clusters={} iterations={} radius_bound={} max_radius={worst} crossing={} target={}",
                partition.clusters.len(),
                partition.iterations,
                partition.radius_bound,
                format_rational(crossing),
                format_rational(target)
            )?;
            for (i, c) in partition.clusters.iter().enumerate() {
                writeln!(out, "cluster {i}: {}", format_vertex_set(c))?;
            }
            if crossing > target {
                failure = Some("crossing weight above target".to_string());
            }
        }
        Command::EvalFo { graph, formula, builtin, c, t } => {
            let g = read_graph(graph)?.graph;
            let phi = match (formula, builtin) {
                (Some(p), _) => fo::parse(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
                (None, Some(Builtin::PhiD)) => fo::build_phi_d(*c),
                (None, Some(Builtin::PsiDprime)) => {
                    ensure!(*t >= 1, "t must be at least 1");
                    fo::build_psi_dprime(*c, *t)
                }
                (None, None) => bail!("give --formula or --builtin"),
            };
            let set = fo::defined_set(&g, &phi)?;
            writeln!(out, "size={}", set.len())?;
            writeln!(out, "set={}", format_vertex_set(&set))?;
        }
        Command::Sweep { family, sizes, algorithm, args, seed, csv } => {
            let config = SweepConfig {
                family: family.clone(),
                sizes: parse_size_range(sizes)?,
                algorithm: *algorithm,
                params: args.params(),
                seed: *seed,
            };
            let rows = run_sweep(&config)?;
            match csv {
                Some(p) => {
                    let file = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    write_csv(&rows, file)?;
                    writeln!(out, "wrote {} rows to {}", rows.len(), p.display())?;
                }
                None => {
                    let mut buf = Vec::new();
                    write_csv(&rows, &mut buf)?;
                    out.push_str(&String::from_utf8(buf)?);
                }
            }
        }
    }
    Ok(Report { text: out, failure })
}
