use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A multiplication table (or grading) violates a group axiom.
    #[error("group axiom `{axiom}` fails at {witness:?}")]
    GroupAxiom {
        axiom: &'static str,
        witness: Vec<usize>,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    /// An enumeration or group order is above the configured limit.
    #[error("resource limit exceeded: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("numerical failure: {message} (residual {residual:.3e})")]
    Numerical { message: String, residual: f64 },

    /// A construction produced data that fails its own consistency checks.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("serialization: {0}")]
    Serde(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
