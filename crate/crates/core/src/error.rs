// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by grid construction, field synthesis, propagation and the
/// optimizer.
#[derive(Debug, Error)]
pub enum SpooError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("initial state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("level index {index} out of range for a {levels}-level system")]
    LevelOutOfRange { index: usize, levels: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid quantum system: {0}")]
    InvalidSystem(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed csv at line {line}: {reason}")]
    Csv { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SpooError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SpooError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SpooError>;
