use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("unknown group element `{0}`")]
    UnknownElement(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("category is not left-finite: non-identity cycle through object `{0}`")]
    NotLeftFinite(String),

    #[error("category has a cycle of non-identity morphisms through object `{0}`, its nerve is infinite")]
    LoopyCategory(String),

    #[error("order is not reflexive at `{0}`")]
    NotReflexive(String),

    #[error("order is not transitive: `{0}` <= `{1}` <= `{2}` but not `{0}` <= `{2}`")]
    NotTransitive(String, String, String),

    #[error("order is not antisymmetric: `{0}` <= `{1}` <= `{0}`")]
    NotAntisymmetric(String, String),

    #[error("objects of unequal degree in U: `{0}` has degree {1}, `{2}` has degree {3}")]
    MixedDegrees(String, usize, String, usize),

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),

    #[error("simplicial set of dimension {dim} exceeds the dimension cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
