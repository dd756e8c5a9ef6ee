//! Domain data model and signal processing: Beer-Lambert conversion,
//! standardization, resampling, temporal fusion and windowing.

mod fuse;
mod mbll;
mod resample;
mod scaler;
mod window;

pub use fuse::{align_and_fuse, concat_matrices, FeatureMatrix};
pub use mbll::{mbll_convert, MbllGeometry, OdPair};
pub use resample::{downsample, DownsampleMethod};
pub use scaler::{apply_scaler, fit_scaler, ScalerParams};
pub use window::{segment_windows, Window, WindowedDataset};

use serde::{Deserialize, Serialize};

use crate::class::ConditionLabel;
use crate::error::{Error, Result};

/// The sensor a channel came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    /// Driving telemetry (speed, angular velocity, acceleration, controls).
    Simulator,
    /// Raw optical density change at one wavelength.
    FnirsOd,
    /// Hemoglobin concentration change recovered from optical density.
    FnirsHb,
    /// Eye tracking (fixation duration, gaze direction).
    Eye,
}

/// One uniformly sampled channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSeries {
    pub name: String,
    pub modality: Modality,
    pub rate_hz: f64,
    pub samples: Vec<f64>,
    pub start_time_s: f64,
}

impl ChannelSeries {
    pub fn new(
        name: impl Into<String>,
        modality: Modality,
        rate_hz: f64,
        samples: Vec<f64>,
        start_time_s: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(rate_hz > 0.0) {
            return Err(Error::ConfigInvalid(format!(
                "channel '{name}': rate must be positive, got {rate_hz}"
            )));
        }
        if let Some(pos) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::MalformedData(format!(
                "channel '{name}': non-finite sample at index {pos}"
            )));
        }
        Ok(Self {
            name,
            modality,
            rate_hz,
            samples,
            start_time_s,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// End of the covered time span (exclusive).
    pub fn end_time_s(&self) -> f64 {
        self.start_time_s + self.samples.len() as f64 / self.rate_hz
    }
}

/// A contiguous, labeled stretch of a recording.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelInterval {
    pub start_s: f64,
    pub end_s: f64,
    pub label: ConditionLabel,
}

/// One session: all channels plus the condition label stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub channels: Vec<ChannelSeries>,
    pub labels: Vec<LabelInterval>,
}

impl Recording {
    /// Validates the label stream and channel coverage invariants.
    pub fn validate(&self) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::MalformedData("recording has no label intervals".into()));
        }
        for interval in &self.labels {
            if !(interval.end_s > interval.start_s) {
                return Err(Error::MalformedData(format!(
                    "label interval [{}, {}] is empty or reversed",
                    interval.start_s, interval.end_s
                )));
            }
        }
        for pair in self.labels.windows(2) {
            if pair[1].start_s < pair[0].end_s {
                return Err(Error::MalformedData(format!(
                    "label intervals overlap or are out of order near t = {}",
                    pair[1].start_s
                )));
            }
        }
        let labeled_start = self.labels[0].start_s;
        let labeled_end = self.labels[self.labels.len() - 1].end_s;
        for channel in &self.channels {
            // Half a sample period of slack at each edge.
            let slack = 0.5 / channel.rate_hz;
            if channel.start_time_s > labeled_start + slack
                || channel.end_time_s() < labeled_end - slack
            {
                return Err(Error::MalformedData(format!(
                    "channel '{}' covers [{:.3}, {:.3}] but labels span [{:.3}, {:.3}]",
                    channel.name,
                    channel.start_time_s,
                    channel.end_time_s(),
                    labeled_start,
                    labeled_end
                )));
            }
        }
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Option<&ChannelSeries> {
        self.channels.iter().find(|c| c.name == name)
    }

    /// Label at time `t`, if `t` falls inside an interval. Also reports the
    /// interval's position for window grouping.
    pub fn label_at(&self, t: f64) -> Option<(usize, ConditionLabel)> {
        self.labels
            .iter()
            .enumerate()
            .find(|(_, interval)| t >= interval.start_s && t < interval.end_s)
            .map(|(idx, interval)| (idx, interval.label))
    }
}
