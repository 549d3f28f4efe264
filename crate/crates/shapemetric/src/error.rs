//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Geometry with no vertices or no faces where at least one is required.
    #[error("empty geometry: {0}")]
    EmptyGeometry(&'static str),

    /// Geometry that exists but carries no usable measure (zero extent, zero
    /// total surface area).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    /// A file failed to parse under the declared format.
    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Indices or counts that violate the mesh structure contract.
    #[error("structural error: {0}")]
    Structure(String),

    /// Non-finite or otherwise unusable numeric payloads.
    #[error("data error: {0}")]
    Data(String),

    /// An argument outside the operation's accepted domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
