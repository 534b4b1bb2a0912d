use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("polynomial is not divisible")]
    NotDivisible,

    #[error("invalid algebra: {0}")]
    InvalidKind(String),

    #[error("invalid generator index: {0}")]
    InvalidIndex(String),

    #[error("kind mismatch: {0} vs {1}")]
    KindMismatch(String, String),

    #[error("invalid root vector {0:?}")]
    InvalidRootVector(Vec<i64>),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("matrix shape error: {0}")]
    Shape(String),

    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,

    #[error("rho' is not generic: {0}")]
    BadGenericVector(String),

    #[error("factorization mismatch: {0}")]
    FactorizationMismatch(String),

    #[error("exact divisibility failed: {0}")]
    DivisibilityFailure(String),

    #[error("not a centre polynomial: {0}")]
    MembershipFailure(String),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("{0}")]
    Parse(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("unknown variable '{name}' at {line}:{column}")]
    UnknownVariable { name: String, line: usize, column: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
