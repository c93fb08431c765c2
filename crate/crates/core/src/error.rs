use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },

    #[error("unknown variable `{name}` in context {context}")]
    UnknownVariable { name: String, context: String },

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("{operation} is not defined in context {context}")]
    WrongContext {
        operation: &'static str,
        context: String,
    },

    #[error("hamiltonian input must not depend on t: {0}")]
    DependsOnT(String),

    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("{element} is not an eigenvector of torus element {torus}")]
    NotEigenvector { element: String, torus: String },

    #[error("unsupported rank {rank} for {kind} (allowed {min}..={max})")]
    UnsupportedRank {
        kind: String,
        rank: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid algebra name `{0}`")]
    InvalidAlgebra(String),

    #[error("{what} = {value} exceeds the cutoff {limit}")]
    CutoffExceeded {
        what: &'static str,
        value: i64,
        limit: i64,
    },

    #[error("unresolved generator `{0}`")]
    UnresolvedGenerator(String),

    #[error("element is not expressible in the basis: {0}")]
    NotInBasis(String),

    #[error("incompatible realizations: {0}")]
    Realization(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
