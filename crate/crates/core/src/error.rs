use alloc::string::String;

use crate::graph::VertexId;

/// Errors raised by the graph algorithms in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("edge {0}-{1} is not in the graph")]
    UnknownEdge(VertexId, VertexId),
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error("operation needs a graph with at least one vertex")]
    EmptyGraph,
    #[error("star {index} (center {center}): {defect}")]
    InvalidStar {
        index: usize,
        center: VertexId,
        defect: StarDefect,
    },
    #[error("vertex {0} is not covered by any star")]
    UncoveredVertex(VertexId),
    #[error("{what} has {size} vertices, above the search cap of {cap}")]
    SearchRefused {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("set does not dominate the graph")]
    NotDominating,
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("formula has {0} free variables, expected exactly one")]
    FreeVariableCount(usize),
    #[error("formula parse error at byte {offset}: {message}")]
    FormulaParse { offset: usize, message: String },
    #[error("cluster {index} has {size} vertices, above the exact-solver cap of {cap}; try a larger epsilon")]
    ClusterTooLarge {
        index: usize,
        size: usize,
        cap: usize,
    },
    #[error("no iteration count satisfies the clustering target within {0} iterations")]
    IterationCapExceeded(u64),
    #[error("simulation did not finish within {0} rounds")]
    RoundLimit(u32),
    #[error("vertex {from} sent a message to non-neighbor {to}")]
    InvalidRecipient { from: VertexId, to: VertexId },
    #[error("clustering left crossing weight {crossing} above target {target}")]
    ClusteringBoundViolated { crossing: String, target: String },
}

/// What is wrong with a star handed to a contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarDefect {
    Overlap(VertexId),
    LeafNotAdjacent(VertexId),
    Unknown(VertexId),
}

impl core::fmt::Display for StarDefect {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StarDefect::Overlap(v) => write!(f, "vertex {v} already belongs to another star"),
            StarDefect::LeafNotAdjacent(v) => write!(f, "leaf {v} is not adjacent to the center"),
            StarDefect::Unknown(v) => write!(f, "vertex {v} is not in the graph"),
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
