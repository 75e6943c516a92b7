use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant to an exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} supports at most {cap} vertices, graph has {got}")]
    TooLarge {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("active subgraph is disconnected")]
    NotATile,

    #[error("cycle hypothesis fails on cycle {cycle}: {detail}")]
    Hypothesis { cycle: String, detail: String },

    #[error("point is not in the arrangement: {0}")]
    NotInArrangement(String),

    #[error("assignments are not on the same fiber: {0}")]
    NotSameFiber(String),

    #[error("rendering supports rank at most 2, graph has rank {0}")]
    UnsupportedRank(usize),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Window and size problems are reported separately from bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::TooLarge { .. } | Error::WindowTooSmall(_) | Error::UnsupportedRank(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
