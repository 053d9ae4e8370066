use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),

    #[error("commutator is not a scalar matrix")]
    NotScalarCommutator,

    #[error("generators do not commute projectively: {0}")]
    NotAbelian(String),

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("closure exceeded the element cap of {0}")]
    CapExceeded(usize),

    #[error("computation bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("invariant not determined: {0}")]
    Undetermined(String),

    #[error("not a maximal abelian invariant: {0}")]
    NotMaximal(String),
}

impl Error {
    /// True for errors caused by hitting a configured size bound rather than bad input.
    pub fn is_bound(&self) -> bool {
        matches!(self, Error::CapExceeded(_) | Error::BoundExceeded(_))
    }
}
