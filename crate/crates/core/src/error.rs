use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("size bound exceeded: search budget of {budget} candidate assignments exhausted")]
    SizeBoundExceeded { budget: u64 },
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown procedural family {0}")]
    UnknownFamily(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("invalid monoidal structure: {0}")]
    InvalidMonoidal(String),
    #[error("family is not directed: {0}")]
    NotDirected(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("premise violated: {0}")]
    PremiseViolated(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
