use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph order {0} exceeds the limit of {max} vertices", max = crate::graph::MAX_ORDER)]
    OrderTooLarge(usize),

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("search refused: {reason} (estimated search space {estimate})")]
    Infeasible { reason: String, estimate: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid step: {0}")]
    InvalidStep(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
