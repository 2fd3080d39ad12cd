use thiserror::Error;

/// Errors raised by constructors and checks across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid invariant factors {factors:?}: {reason}")]
    InvalidFactors { factors: Vec<i64>, reason: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),

    #[error("groups do not match: {0}")]
    Mismatch(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("ring axiom violated: {0}")]
    RingAxiom(String),

    #[error("module axiom violated: {0}")]
    ModuleAxiom(String),

    #[error("map does not commute with the ring action: {0}")]
    NotLinear(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("invalid level chain: {0}")]
    InvalidChain(String),

    #[error("level index out of range: {0}")]
    BadLevel(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("invalid presheaf or cosheaf table: {0}")]
    InvalidTable(String),

    #[error("table does not satisfy the gluing condition: {0}")]
    NotASheaf(String),

    #[error("duplicate point {0} in section assignment")]
    DuplicatePoint(usize),

    #[error("unsupported functor: {0}")]
    UnsupportedFunctor(String),

    #[error("invalid graph or action: {0}")]
    InvalidGraph(String),

    #[error("edge inversion: group element {element} reverses edge {edge}")]
    EdgeInversion { element: usize, edge: usize },

    #[error("sequence is not exact: {0}")]
    NotExact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
