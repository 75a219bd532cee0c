use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid interval ({lo}, {hi}): lower endpoint exceeds upper endpoint")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension must be at least {min}, got {got}")]
    InvalidDimension { got: usize, min: usize },

    /// The representation cannot answer the query exactly.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("half-space direction is not aligned with the set's symmetry axis")]
    Misaligned,

    #[error("set has Gaussian measure {0}, expected a value strictly inside (0, 1)")]
    DegenerateMass(f64),

    #[error("set has no finite boundary point")]
    NoBoundary,

    #[error("{0}")]
    NoConvergence(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed set descriptor: {0}")]
    Descriptor(#[from] serde_json::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
