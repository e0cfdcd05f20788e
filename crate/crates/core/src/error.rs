use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function was evaluated outside its domain, e.g. `pow(x, 0.5)` at `x <= 0`.
    #[error("domain error: {expr} is undefined at x = {x}")]
    Domain { expr: String, x: f64 },

    /// The textual function grammar rejected the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A parameter is outside the range an operation accepts.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A Fejér weight failed its positivity or symmetry check.
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    /// A theorem needs a parameter that was not supplied.
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
