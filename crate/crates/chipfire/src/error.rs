use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Illegal moves carry enough context to reconstruct the failure (which
/// vertex, what it had, what it needed); guard trips are distinguished from
/// ordinary input errors so callers can map them to a dedicated exit code.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(usize),

    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("line {line}: {reason}")]
    ParseGraph { line: usize, reason: String },

    #[error("invalid chip configuration: {0}")]
    ParseConfig(String),

    #[error("invalid firing sequence: {0}")]
    ParseSequence(String),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),

    #[error("cannot remove the only vertex of a single-vertex tree")]
    SingleVertexTree,

    #[error("configuration has {got} entries but the graph has {n} vertices")]
    DimensionMismatch { got: usize, n: usize },

    #[error("illegal fire: vertex {vertex} has {available} chips but needs {required}")]
    IllegalFire {
        vertex: usize,
        available: u64,
        required: u64,
    },

    /// Like [`Error::IllegalFire`] but inside a sequence; `step` is 0-based
    /// and displayed 1-based.
    #[error("illegal fire at step {}: vertex {vertex} has {available} chips but needs {required}", step + 1)]
    IllegalStep {
        step: usize,
        vertex: usize,
        available: u64,
        required: u64,
    },

    #[error("chip totals differ ({from_total} vs {to_total}); firing conserves chips")]
    TotalMismatch { from_total: u64, to_total: u64 },

    #[error("configuration is not self-reachable")]
    NotSelfReachable,

    #[error("witness sequence must be nonempty")]
    EmptyWitness,

    #[error("sequence never fires vertex {0}")]
    VertexNeverFired(usize),

    #[error("total chip count overflows a 64-bit counter")]
    Overflow,

    #[error("{what} guard exceeded (limit {limit})")]
    GuardExceeded { what: &'static str, limit: u64 },

    #[error("no tree catalog for {0} vertices (catalog covers 1 through 7)")]
    CatalogMissing(usize),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
