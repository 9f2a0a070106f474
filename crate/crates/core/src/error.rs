use thiserror::Error;

/// Errors raised by the operator engine and the physics layers built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch in {op}: {lhs:?} vs {rhs:?}")]
    Shape {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("dimension {requested} exceeds the configured maximum {max}")]
    Size { requested: usize, max: usize },

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("massless momenta are not supported")]
    UnsupportedMass,

    #[error("boundary: {0}")]
    Boundary(String),

    #[error("vacuum profile is identically zero")]
    DegenerateVacuum,

    #[error("residual undefined for a zero bispinor")]
    UndefinedResidual,

    #[error("state grew to {entries} stored amplitudes (cap {cap}); reduce the lattice size or N")]
    Resource { entries: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
