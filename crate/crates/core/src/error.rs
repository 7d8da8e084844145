use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("modulus {0} does not fit below 2^31")]
    ModulusTooLarge(u64),
    #[error("field GF({modulus}) too small: need at least {needed} evaluation points")]
    FieldTooSmall { needed: usize, modulus: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("no usable arc from `{from}` to `{to}`")]
    NoArc { from: String, to: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("transmission #{seq} (round {round}): payload is not computable by `{sender}`")]
    NotComputable { seq: usize, round: u32, sender: String },
    #[error("transmission #{seq}: edge {edge} already used in round {round}")]
    EdgeReused { seq: usize, round: u32, edge: usize },
    #[error("transmission #{seq}: edge {edge} is directed and cannot be used backwards")]
    BadDirection { seq: usize, edge: usize },
    #[error("transmission #{seq}: round {round} precedes round {previous}")]
    RoundOrder { seq: usize, round: u32, previous: u32 },
    #[error("session has no transmissions")]
    EmptySession,
    #[error("adversary strength {k} exceeds candidate pool of {pool}")]
    AdversaryPool { k: usize, pool: usize },
    #[error("no bound stated for {0}")]
    NoBound(String),
    #[error("state space of {states} assignments exceeds budget {budget}")]
    BudgetExceeded { states: u128, budget: u128 },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
