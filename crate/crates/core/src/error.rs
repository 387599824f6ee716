use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("dimension bound exceeded: {0}")]
    DimensionBoundExceeded(String),
    #[error("inhomogeneous relation: {0}")]
    InhomogeneousRelation(String),
    #[error("relation is not admissible: {0}")]
    NonAdmissible(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("quiver has an oriented cycle")]
    CyclicQuiver,
    #[error("operation requires a nonzero module")]
    ZeroModule,
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("not Gorenstein within bound {0}")]
    NotGorenstein(usize),
    #[error("Gorenstein dimension unknown")]
    GUnknown,
    #[error("module is not Cohen-Macaulay: {0}")]
    NotCohenMacaulay(String),
    #[error("infinite global dimension (exceeds bound {0})")]
    InfiniteGlobalDimension(usize),
    #[error("global dimension {found} too large (need at most {allowed})")]
    GlobalDimensionTooLarge { found: usize, allowed: usize },
    #[error("nilpotence bound {0} exceeded")]
    NilpotenceBoundExceeded(usize),
    #[error("max degree {0} reached before the tensor algebra vanished")]
    MaxDegreeReached(usize),
    #[error("relations are not a minimal Ext^2-basis: {0}")]
    RelationsNotMinimal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
