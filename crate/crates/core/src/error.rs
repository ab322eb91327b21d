use thiserror::Error;

/// Crate-wide error type. Guard trips carry enough context to name the
/// offending parameters, because most of them abort long batch runs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid lattice geometry: {0}")]
    Geometry(String),

    #[error("invalid model specification: {0}")]
    ModelSpec(String),

    #[error("state space too large: {actual} states exceeds the guard of {limit}")]
    StateSpaceOverflow { actual: usize, limit: usize },

    #[error("Fock space dimension {actual} exceeds the guard of {limit}")]
    DimensionOverflow { actual: usize, limit: usize },

    #[error("linear algebra failure: {0}")]
    Linear(String),

    #[error("statistics refused: {0}")]
    Statistics(String),

    #[error("PDE solver failure: {0}")]
    Pde(String),

    #[error("tolerance breach: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
