use thiserror::Error;

/// Errors reported by the library.
///
/// Structural misuse (mismatched rings, bad dimensions) is separated from
/// mathematical verdicts: a failed identity is report content, not an error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("variable index {index} out of range for ring with {count} variables")]
    VarIndexOutOfRange { index: usize, count: usize },

    #[error("incompatible form kinds: {0}")]
    KindMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },

    #[error("regime invalid: {0}")]
    RegimeInvalid(String),

    #[error("form is not closed: {0}")]
    NotClosed(String),

    #[error("connection '{label}' is not flat: {detail}")]
    NotFlat { label: String, detail: String },

    #[error("degree-bound guard failed: {0}")]
    DegreeGuard(String),

    #[error("unknown connection label '{0}'")]
    UnknownLabel(String),

    #[error("registry mismatch: {0}")]
    RegistryMismatch(String),

    #[error("found primitive failed exact re-verification: {0}")]
    CertificationFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
