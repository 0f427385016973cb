use thiserror::Error;

/// Crate-wide error type. Variants that indicate a broken theorem (rather than
/// bad user input) are raised by `assert!`/`panic!` at the failure site instead;
/// everything here is reachable from well-formed but unlucky input.
#[derive(Error, Debug)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("{0} is not a supported prime")]
    NotPrime(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree bookkeeping violated: {0}")]
    Degree(String),
    #[error("filtration bookkeeping violated: {0}")]
    Weight(String),
    #[error("not a complex: {0}")]
    NotComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("not a fibration: {0}")]
    NotFibration(String),
    #[error("not a weak equivalence: {0}")]
    NotWeakEquivalence(String),
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("element is not Maurer-Cartan: {0}")]
    NotMaurerCartan(String),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("solution set is not finite: {0}")]
    Infinite(String),
    #[error("characteristic zero required: {0}")]
    CharZeroRequired(String),
    #[error("no filler exists: {0}")]
    NoFiller(String),
    #[error("differential is not strict with respect to the filtration: {0}")]
    NotStrict(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
