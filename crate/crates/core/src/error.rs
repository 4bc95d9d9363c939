use thiserror::Error;

/// Failure modes surfaced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters or inputs outside an operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// The requested spectral object does not exist for this problem.
    #[error("no eigenvalue: {0}")]
    NoEigenvalue(String),
    /// Adaptive integration could not continue past `reached`.
    #[error("integration stalled at x = {reached}: {detail}")]
    Integration { reached: f64, detail: String },
    /// Bracketing or root finding failed to converge.
    #[error("search: {0}")]
    Search(String),
    /// A configurable resource cap was exceeded; `required` is a cap that would suffice.
    #[error("resource cap exceeded: {detail} (required cap: {required})")]
    Resource { required: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
