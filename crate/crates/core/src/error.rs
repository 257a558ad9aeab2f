use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Problem too large for exhaustive enumeration.
    #[error("capacity error: {what} = {value} exceeds limit {limit}")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    /// An iterative algorithm hit its iteration cap.
    #[error("algorithm error: iteration cap of {cap} rounds exceeded")]
    IterationCap { cap: usize },

    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Returns a domain error unless `value` is finite and nonnegative.
pub(crate) fn check_nonneg(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and >= 0, got {value}"
        )))
    }
}
