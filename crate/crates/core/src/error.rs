use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// The requested subgroup index does not divide p - 1.
    #[error("index {n} does not divide p - 1 = {}", .p - 1)]
    Index { n: u64, p: u64 },

    /// The input is too large for a direct computation.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A numerical cross-check disagreed beyond tolerance.
    #[error("verification failed: {what} (expected {expected}, got {actual})")]
    Verification {
        what: String,
        expected: f64,
        actual: f64,
    },

    /// A certified scan ended on a prime without a solution. This contradicts
    /// the guarantee bound and indicates a bug.
    #[error("internal consistency: largest scanned prime {p} (n = {n}) has no nontrivial solution")]
    Consistency { n: u64, p: u64 },
}
