use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: dimension mismatch, broken normalization, bad syntax.
    #[error("validation error: {0}")]
    Validation(String),

    /// A desk-scale bound was exceeded (LP size, lattice enumeration box).
    #[error("capacity exceeded: {what} (limit {limit}, requested {requested})")]
    Capacity {
        what: String,
        limit: usize,
        requested: usize,
    },

    /// The mathematical object is undefined for this input, e.g. a
    /// reference density that is not integrable.
    #[error("domain error: {0}")]
    Domain(String),

    /// An analytic precondition failed (flat Tian function, zero Lelong number, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Monte Carlo diagnostics rejected the run.
    #[error("sampling diagnostic: {0}")]
    Diagnostic(String),

    /// A theorem check failed; `check` names the violated property.
    #[error("verification failed [{check}]: {detail}")]
    Verification { check: String, detail: String },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Error {
        Error::Validation(msg.into())
    }

    pub(crate) fn dim_mismatch(what: &str, left: usize, right: usize) -> Error {
        Error::Validation(format!("{what}: dimension mismatch ({left} vs {right})"))
    }
}
