use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected ambient rank {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{0}: operand is the empty polyhedron")]
    EmptyOperand(&'static str),

    #[error("pairing is undefined on the empty polyhedron")]
    UndefinedOnEmpty,

    #[error("evaluation is -infinity at point {point}: u is not in the dual of the tail cone")]
    MinusInfinity { point: String },

    #[error("degree undefined: coefficient at {point} is empty (restricted locus)")]
    LocusRestricted { point: String },

    #[error("not a valid fan or complex: {0}")]
    FanValidity(String),

    #[error("malformed complex: {0}")]
    Validity(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("resource cap exceeded: {what} = {value} > {cap}")]
    ResourceCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
