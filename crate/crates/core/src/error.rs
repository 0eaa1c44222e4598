use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A memory guard would be exceeded.
    #[error("resource limit: {what} = {requested} exceeds the cap {cap}")]
    Resource {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    /// An operation's precondition on its inputs does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// GD produced a non-finite value or gradient.
    #[error("non-finite {quantity} at step {step} (alpha = {alpha})")]
    NonFinite {
        step: usize,
        quantity: &'static str,
        alpha: f64,
    },

    /// `f_star` exceeds the observed minimum of a trajectory.
    #[error("inconsistent optimum: f_star = {f_star} but min f_t = {min_f}")]
    Inconsistent { f_star: f64, min_f: f64 },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
