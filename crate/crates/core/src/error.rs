use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad user-supplied configuration: boxes, flags, graph parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("non-finite function value {value} at point {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("vertex {0} is the lowest minimum of its component; no lower minimum is reachable")]
    NoLowerMinimum(usize),

    #[error("brute-force oracle scope exceeded: {0}")]
    OracleScope(String),

    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFinite { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
