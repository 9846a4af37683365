use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("variable index {var} out of range for {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },

    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is the zero matrix")]
    ZeroMatrix,

    #[error("generator {index} is not positive semidefinite")]
    NotPositiveSemidefinite { index: usize },

    #[error("generators {0} and {1} are proportional")]
    ProportionalGenerators(usize, usize),

    #[error("entry not divisible by lattice scale {scale}")]
    NotInLattice { scale: String },

    #[error("expected {expected} generators, found {found}")]
    GeneratorCount { expected: usize, found: usize },

    #[error("degenerate cone: coordinate matrix is singular")]
    DegenerateCone,

    #[error("generators are linearly dependent (cone is not simplicial)")]
    NotSimplicial,

    #[error("group element is not unimodular (det = {det})")]
    NotUnimodular { det: String },

    #[error("volume function vanishes identically (degenerate pencil)")]
    DegeneratePencil,

    #[error("symbolic mode limited to N <= {limit} variables, got {n}")]
    CostGuard { n: usize, limit: usize },

    #[error("degenerate residue: S_{k} vanishes")]
    DegenerateResidue { k: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate entry: {0}")]
    Duplicate(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numeric check failed: {0}")]
    Numeric(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
