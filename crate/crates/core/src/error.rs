use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A size or index parameter is outside the supported range.
    #[error("out of range: {0}")]
    Range(String),

    /// Inputs are individually valid but do not fit together.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The request is well formed but exceeds what this build can hold in memory
    /// or finish in reasonable time.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An exact identity that must hold did not (e.g. a non-integral
    /// structure constant). Always indicates a bug upstream.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
