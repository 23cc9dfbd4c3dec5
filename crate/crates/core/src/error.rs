use thiserror::Error;

/// Errors produced by the semigroup computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("generators {0:?} have gcd {1} != 1; the semigroup is not cofinite")]
    NotCofinite(Vec<u64>, u64),
    #[error("{0} is not an element of the semigroup")]
    NotMember(i64),
    #[error("empty result: {0}")]
    EmptyResult(String),
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: usize },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn limit(what: impl Into<String>, limit: usize) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            limit,
        }
    }
}
