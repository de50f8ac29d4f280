use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated an operation's precondition or a type invariant.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exponential routine was asked to exceed its configured size cap.
    #[error("resource limit exceeded: {what} is {actual}, cap is {cap}")]
    Resource {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, actual: usize, cap: usize) -> Result<()> {
        if actual > cap {
            Err(Error::Resource { what, actual, cap })
        } else {
            Ok(())
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
