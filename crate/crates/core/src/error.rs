use thiserror::Error;

/// Errors raised across the crate.
///
/// Vertex fields hold internal 0-based ids; messages print the 1-based
/// `v<id>` form used in files and on the command line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("non-positive cost at v{}", .vertex + 1)]
    NonPositiveCost { vertex: usize },
    #[error("v{} is not in the candidate set", .vertex + 1)]
    VertexNotInCandidate { vertex: usize },
    #[error("unknown vertex id {}", .vertex + 1)]
    UnknownVertex { vertex: usize },
    #[error("v{} does not appear in the decision tree", .vertex + 1)]
    MissingVertex { vertex: usize },
    #[error("v{} appears more than once in the decision tree", .vertex + 1)]
    DuplicateVertex { vertex: usize },
    #[error("query to v{} lies outside its candidate set", .vertex + 1)]
    QueryOutsideCandidate { vertex: usize },
    #[error("children of v{} do not match the responses of its query", .vertex + 1)]
    ComponentMismatch { vertex: usize },
    #[error("vertex set does not induce a connected subtree")]
    NotConnected,
    #[error("exact solver exceeded its limit of {limit} search states")]
    StateLimitExceeded { limit: usize },
    #[error("invalid instance size {n}")]
    InvalidSize { n: usize },
    #[error("no vertex is heavy at the given threshold")]
    NoHeavyVertex,
    #[error("no neighbor of the subtree is queried in the partial decision tree")]
    NoNeighborQueried,
    #[error("queried neighbors do not lie on one root-to-leaf path")]
    NotAPath,
    #[error("response branch below v{} is already occupied", .vertex + 1)]
    BranchOccupied { vertex: usize },
    #[error("v{} is already queried in the partial decision tree", .vertex + 1)]
    AlreadyQueried { vertex: usize },
    #[error("contracting onto the given vertex set does not yield a tree")]
    AuxiliaryNotATree,
    #[error("construction invariant violated: {0}")]
    Invariant(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Resource exhaustion, as opposed to bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::StateLimitExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
