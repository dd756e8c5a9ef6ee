//! Error type shared across the pipeline.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("extinction matrix is singular (|det| = {det:e} <= tolerance {tolerance:e})")]
    SingularExtinction { det: f64, tolerance: f64 },

    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix needs at least {needed} samples, got {got}")]
    EmptyMatrix { got: usize, needed: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("series is empty or shorter than the downsampling factor")]
    EmptySeries,

    #[error("channel '{channel}' rate {rate_hz} Hz is not an integer multiple of target {target_hz} Hz")]
    RateIncompatible {
        channel: String,
        rate_hz: f64,
        target_hz: f64,
    },

    #[error("channel time spans do not overlap")]
    NoOverlap,

    #[error("label interval of {interval_len} samples is shorter than window length {window_len}")]
    WindowTooLong {
        interval_len: usize,
        window_len: usize,
    },

    #[error("degenerate groups for ANOVA: {reason}")]
    DegenerateGroups { reason: String },

    #[error("k = {k} out of range [1, {max}]")]
    KOutOfRange { k: usize, max: usize },

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: String, detail: String },

    #[error("invalid class index {index}, expected 0..{n_classes}")]
    InvalidClass { index: usize, n_classes: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("class {class} missing from the training data")]
    MissingClass { class: String },

    #[error("invalid n-back level {level}, expected 0, 1 or 2")]
    InvalidLevel { level: u8 },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("AUC undefined: no class has both positive and negative samples")]
    UndefinedAuc,

    #[error("malformed data: {0}")]
    MalformedData(String),

    #[error("weight file corrupt: {0}")]
    WeightFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn shape(op: &str, detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            op: op.to_string(),
            detail: detail.into(),
        }
    }
}
