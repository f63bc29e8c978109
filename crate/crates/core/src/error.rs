use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexIndex { vertex: usize, count: usize },

    #[error("edge index {index} out of range (graph has {count} edges)")]
    EdgeIndex { index: usize, count: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("walk is not contiguous at step {step}")]
    InvalidWalk { step: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("lattice matrix is singular")]
    SingularLattice,

    #[error("vertices {0} and {1} occupy the same point of the torus")]
    CoincidentPositions(usize, usize),

    #[error("{0}")]
    Domain(String),

    #[error("{what} = {actual} exceeds the brute-force gate {gate}")]
    GateExceeded {
        what: &'static str,
        actual: usize,
        gate: usize,
    },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
