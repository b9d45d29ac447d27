//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QdError {
    #[error("group error: {0}")]
    Group(String),
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("state error: {0}")]
    State(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("postselected outcome {outcome} has probability {probability:.3e} (< 1e-12)")]
    ImpossibleOutcome { outcome: usize, probability: f64 },
    #[error("experiment error: {0}")]
    Experiment(String),
    #[error("resource guardrail: {0}")]
    Resource(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QdError>;
