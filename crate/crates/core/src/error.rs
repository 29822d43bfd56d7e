use std::path::PathBuf;

use thiserror::Error;

/// Errors produced while building meshes, resolving the interface, assembling
/// or solving the discrete problem, and running experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh file {path}: line {line}: {msg}")]
    MeshFormat {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("interface not resolved on element {element}: {msg}; resolve the interface: refine mesh")]
    UnresolvedInterface { element: usize, msg: String },

    #[error("degenerate cut geometry on element {element}: {msg}")]
    DegenerateCut { element: usize, msg: String },

    #[error("basis derivative of order {order} requested, but the family only supports up to {max}")]
    DerivativeOrder { order: usize, max: usize },

    #[error("invalid parameter {name}: {msg}")]
    InvalidParameter { name: &'static str, msg: String },

    #[error("mean-zero pressure constraint is structurally singular (all entries zero)")]
    SingularConstraint,

    #[error("factorization breakdown: {0}")]
    Factorization(String),

    #[error("solve check failed: {0}")]
    SolveCheck(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("no exact solution available for error computation")]
    MissingExactSolution,

    #[error("manufactured case validation failed: {0}")]
    CaseValidation(String),

    #[error("config {path}: {msg}")]
    Config { path: String, msg: String },

    #[error("level n={n}: {source}")]
    Level {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
