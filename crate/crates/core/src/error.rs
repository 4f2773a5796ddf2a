use thiserror::Error;

/// Everything that can go wrong while building or querying the structures in
/// this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // ---- input errors ----
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("poset has no elements")]
    EmptyPoset,
    #[error("order is not antisymmetric: `{0}` and `{1}` lie on a cycle")]
    OrderCycle(String, String),
    #[error("too many elements: {count} (at most {max} supported)")]
    TooManyElements { count: usize, max: usize },
    #[error("elements belong to different carriers")]
    CarrierMismatch,
    #[error("set {members} is not a regular down-closed set")]
    NotRegular { members: String },
    #[error("set {members} is not a filter")]
    NotFilter { members: String },
    #[error("set {members} is not dense")]
    NotDense { members: String },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("relation `{rel}` has arity {expected} but was given {found} arguments")]
    Arity { rel: String, expected: usize, found: usize },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("formula has free variable `{0}`")]
    FreeVariable(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("partition is not compatible with the structure: {0}")]
    IncompatiblePartition(String),
    #[error("invalid name system: {0}")]
    InvalidNameSystem(String),
    #[error("malformed document: {0}")]
    Document(String),
    #[error("{0}")]
    Io(String),

    // ---- precondition errors ----
    #[error("poset is not separative (witness `{witness}`)")]
    NonSeparative { witness: String },
    #[error("filter is not generic: it misses dense set {missed}")]
    NotGeneric { missed: String },
    #[error("dense family is not admissible: it lacks required set {missing}")]
    InadmissibleFamily { missing: String },

    // ---- resource errors ----
    #[error("{what}: {count} exceeds the cap of {cap}")]
    CapExceeded { what: String, count: String, cap: usize },
}

impl Error {
    /// Process exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn cap(what: impl Into<String>, count: impl ToString, cap: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            count: count.to_string(),
            cap,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
