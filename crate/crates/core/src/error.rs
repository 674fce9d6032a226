use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("non-physical resistance {0}: must be strictly positive")]
    NonPositiveResistance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph too large for dense float solve: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
}
