use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate top simplex {0}")]
    DuplicateSimplex(String),
    #[error("top simplex has {got} vertices, expected {expected}")]
    BadArity { expected: usize, got: usize },
    #[error("degenerate simplex {0} (repeated vertex)")]
    DegenerateSimplex(String),
    #[error("vertex ids must be dense 0..{expected}, found id {found}")]
    SparseVertexIds { expected: usize, found: u32 },
    #[error("complex has no top simplices")]
    EmptyComplex,
    #[error("dimension {0} out of range for this complex")]
    BadDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown simplex {0}")]
    UnknownSimplex(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("supplied cycles are not independent in homology: {0}")]
    NotIndependent(String),
    #[error("cycle is not simple: {0}")]
    NotSimple(String),
    #[error("basis cycle {0} is not simple")]
    NotSimpleBasis(usize),
    #[error("no indexable edge found at cycle vertex {0}")]
    EmptyLocalSide(u32),
    #[error("class index is zero; the fixed-vertex search requires a nonzero index")]
    IndexZero,
    #[error("target state unreachable; the 1-skeleton is not connected")]
    Unreachable,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("complex is not a closed pseudomanifold: {0}")]
    NonManifold(String),
    #[error("not an edge path: {0}")]
    NotAPath(String),
    #[error("deck group rank {0} exceeds the supported maximum of 64")]
    RankTooLarge(usize),
    #[error("negative or non-finite edge weight {0}")]
    BadWeight(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
