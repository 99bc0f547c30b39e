use std::path::PathBuf;

use thiserror::Error;

use crate::ground_state::GroundState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field lives on a different grid or in the wrong space: {0}")]
    Mismatch(String),

    #[error("zero field: {0}")]
    ZeroField(&'static str),

    #[error("ground-state iteration did not converge after {iterations} iterations (last relative change {last_change:.3e})")]
    NonConvergence {
        iterations: usize,
        last_change: f64,
        partial: Box<GroundState>,
    },

    #[error("ground-state iteration collapsed to zero after {iterations} iterations")]
    CollapseToZero { iterations: usize },

    #[error("snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
