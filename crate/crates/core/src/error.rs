use thiserror::Error;

/// Errors produced while loading complexes or running the pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("deck rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cell `{cell}` references unknown face `{face}`")]
    DanglingFace { cell: String, face: String },

    #[error("cell `{cell}` has dimension {dim} but face `{face}` has dimension {face_dim}")]
    FaceDimension {
        cell: String,
        dim: usize,
        face: String,
        face_dim: usize,
    },

    #[error("chain-complex violation at cell `{cell}`: composite boundary has nonzero entry {entry} at face `{face}`")]
    ChainComplex {
        cell: String,
        face: String,
        entry: String,
    },

    #[error("boundary shift for cell `{cell}` has length {got}, expected deck rank {expected}")]
    ShiftLength {
        cell: String,
        expected: usize,
        got: usize,
    },

    #[error("{0}")]
    Invalid(String),

    #[error("eigensolver failed to converge on a {rows}x{cols} matrix")]
    EigenFailure { rows: usize, cols: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
