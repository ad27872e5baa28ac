//! Plain-text graph files.
//!
//! ```text
//! c family=grid-3x3
//! p 9 12
//! e 0 1
//! ew 0 1 3/2
//! vw 4 2/1
//! ```
//!
//! Vertices are `0..n`. `c key=value` lines carry metadata, `ew`/`vw` lines
//! give non-unit weights. Blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use localmds_core::{Graph, Rational, VertexSet};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("vertex ids must be 0..n to be written, found {0}")]
    NonContiguous(u32),
    #[error(transparent)]
    Graph(#[from] localmds_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub metadata: Vec<(String, String)>,
}

/// Accepts `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
    let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
    if q == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(p, q))
}

pub fn format_rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn write_graph(g: &Graph, metadata: &[(String, String)]) -> Result<String, FormatError> {
    if let Some(v) = g.vertices().enumerate().find(|&(i, v)| v != i as u32).map(|(_, v)| v) {
        return Err(FormatError::NonContiguous(v));
    }
    let mut out = String::new();
    for (k, v) in metadata {
        writeln!(out, "c {k}={v}").unwrap();
    }
    writeln!(out, "p {} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {}", e.lo(), e.hi()).unwrap();
    }
    for (v, w) in g.explicit_vertex_weights() {
        writeln!(out, "vw {v} {}", format_rational(w)).unwrap();
    }
    for (e, w) in g.explicit_edge_weights() {
        writeln!(out, "ew {} {} {}", e.lo(), e.hi(), format_rational(w)).unwrap();
    }
    Ok(out)
}

pub fn parse_graph(text: &str) -> Result<GraphFile, FormatError> {
    let mut graph: Option<Graph> = None;
    let mut expected_m = 0;
    let mut metadata = Vec::new();
    let mut edges = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| FormatError::Syntax { line, message };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = fields.first() else { continue };
        if tag == "c" {
            let rest = raw.trim_start()[1..].trim();
            let (k, v) = rest.split_once('=').ok_or_else(|| syntax("expected `c key=value`".into()))?;
            metadata.push((k.trim().to_string(), v.trim().to_string()));
            continue;
        }
        let num = |j: usize| -> Result<u32, FormatError> {
            fields
                .get(j)
                .ok_or_else(|| syntax(format!("`{tag}` line is missing a field")))?
                .parse()
                .map_err(|_| syntax(format!("bad integer `{}`", fields[j])))
        };
        let arity = |want: usize| {
            if fields.len() == want {
                Ok(())
            } else {
                Err(syntax(format!("`{tag}` line takes {} fields", want - 1)))
            }
        };
        if tag == "p" {
            arity(3)?;
            if graph.is_some() {
                return Err(syntax("second header".into()));
            }
            graph = Some(Graph::with_vertices(num(1)? as usize));
            expected_m = num(2)? as usize;
            continue;
        }
        let g = graph.as_mut().ok_or(FormatError::MissingHeader)?;
        let weight = |j: usize| parse_rational(fields[j]).map_err(syntax);
        match tag {
            "e" => {
                arity(3)?;
                g.add_edge(num(1)?, num(2)?)?;
                edges += 1;
            }
            "vw" => {
                arity(3)?;
                g.set_vertex_weight(num(1)?, weight(2)?)?;
            }
            "ew" => {
                arity(4)?;
                g.set_edge_weight(num(1)?, num(2)?, weight(3)?)?;
            }
            _ => return Err(syntax(format!("unknown line type `{tag}`"))),
        }
    }
    let graph = graph.ok_or(FormatError::MissingHeader)?;
    if edges != expected_m {
        return Err(FormatError::EdgeCount {
            expected: expected_m,
            found: edges,
        });
    }
    Ok(GraphFile { graph, metadata })
}

pub fn read_graph(path: &Path) -> Result<GraphFile, FormatError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Whitespace-separated vertex ids; `#` starts a comment.
pub fn parse_vertex_set(text: &str) -> Result<VertexSet, FormatError> {
    let mut set = VertexSet::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        for tok in content.split_whitespace() {
            let v = tok.parse().map_err(|_| FormatError::Syntax {
                line: i + 1,
                message: format!("bad vertex id `{tok}`"),
            })?;
            set.insert(v);
        }
    }
    Ok(set)
}

pub fn format_vertex_set(set: &VertexSet) -> String {
    set.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

