//! Multimodal cognitive-load classification toolkit.
//!
//! End-to-end pipeline for three-level workload classification from driving
//! telemetry, fNIRS and eye tracking: Beer-Lambert conversion, temporal
//! fusion, ANOVA feature selection, a from-scratch CNN-LSTM with
//! backpropagation through time, four classical baselines, an evaluation
//! suite and a deterministic synthetic data generator built around an
//! n-back protocol.

pub mod baselines;
pub mod class;
pub mod config;
pub mod datagen;
pub mod error;
pub mod featsel;
pub mod io;
pub mod metrics;
pub mod nn;
pub mod pipeline;
pub mod rng;
pub mod signal;

pub use class::{CognitiveClass, ConditionLabel, N_CLASSES};
pub use error::{Error, Result};
pub use signal::{
    align_and_fuse, apply_scaler, concat_matrices, downsample, fit_scaler, mbll_convert,
    segment_windows, ChannelSeries, DownsampleMethod, FeatureMatrix, LabelInterval, MbllGeometry,
    Modality, OdPair, Recording, ScalerParams, Window, WindowedDataset,
};
