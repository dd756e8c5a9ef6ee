//! Temporal fusion: bring channels with different sampling rates onto one
//! grid so every time step carries a feature vector of uniform length.

use super::{downsample, DownsampleMethod, Recording};
use crate::class::ConditionLabel;
use crate::error::{Error, Result};

/// Fused samples-by-features matrix with per-row condition labels.
///
/// `interval_ids` tracks which label interval each row came from so that
/// windowing never straddles two intervals; ids are unique per interval and,
/// after [`concat_matrices`], across recordings.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    values: Vec<f64>,
    pub labels: Vec<ConditionLabel>,
    pub interval_ids: Vec<usize>,
    pub rate_hz: f64,
}

impl FeatureMatrix {
    pub fn zeros(
        feature_names: Vec<String>,
        n_samples: usize,
        labels: Vec<ConditionLabel>,
        interval_ids: Vec<usize>,
        rate_hz: f64,
    ) -> Self {
        assert_eq!(labels.len(), n_samples);
        assert_eq!(interval_ids.len(), n_samples);
        let n_features = feature_names.len();
        Self {
            feature_names,
            values: vec![0.0; n_samples * n_features],
            labels,
            interval_ids,
            rate_hz,
        }
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_features() + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let n = self.n_features();
        self.values[row * n + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.n_features();
        &self.values[row * n..(row + 1) * n]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_samples()).map(|i| self.get(i, col)).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    /// New matrix keeping only the named columns, in the given order.
    pub fn select_columns(&self, names: &[String]) -> Result<FeatureMatrix> {
        let mut indices = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.column_index(name).ok_or_else(|| {
                Error::MalformedData(format!("feature '{name}' not present in matrix"))
            })?;
            indices.push(idx);
        }
        let mut out = FeatureMatrix::zeros(
            names.to_vec(),
            self.n_samples(),
            self.labels.clone(),
            self.interval_ids.clone(),
            self.rate_hz,
        );
        for row in 0..self.n_samples() {
            for (new_col, &old_col) in indices.iter().enumerate() {
                out.set(row, new_col, self.get(row, old_col));
            }
        }
        Ok(out)
    }
}

/// Down-samples every selected channel to `target_rate_hz`, truncates to the
/// common overlapping span and stacks the columns in `selected` order.
///
/// Every channel's rate must be an integer multiple of the target rate. Rows
/// are labeled from the recording's label intervals (sampled at the midpoint
/// of each fused period); rows outside any interval are dropped.
pub fn align_and_fuse(
    recording: &Recording,
    target_rate_hz: f64,
    selected: &[String],
    method: DownsampleMethod,
) -> Result<FeatureMatrix> {
    if !(target_rate_hz > 0.0) {
        return Err(Error::ConfigInvalid(format!(
            "target rate must be positive, got {target_rate_hz}"
        )));
    }
    if selected.is_empty() {
        return Err(Error::ConfigInvalid("no features selected for fusion".into()));
    }

    // Validate rates and find the overlapping span.
    let mut channels = Vec::with_capacity(selected.len());
    let mut span_start = f64::NEG_INFINITY;
    let mut span_end = f64::INFINITY;
    for name in selected {
        let channel = recording.channel(name).ok_or_else(|| {
            Error::MalformedData(format!("selected channel '{name}' not in recording"))
        })?;
        let ratio = channel.rate_hz / target_rate_hz;
        let factor = ratio.round();
        if factor < 1.0 || (ratio - factor).abs() > 1e-6 * factor {
            return Err(Error::RateIncompatible {
                channel: name.clone(),
                rate_hz: channel.rate_hz,
                target_hz: target_rate_hz,
            });
        }
        span_start = span_start.max(channel.start_time_s);
        span_end = span_end.min(channel.end_time_s());
        channels.push((channel, factor as usize));
    }
    if span_end <= span_start {
        return Err(Error::NoOverlap);
    }

    // Down-sample each channel over the shared span.
    let mut fused: Vec<Vec<f64>> = Vec::with_capacity(channels.len());
    let mut n_rows = usize::MAX;
    for (channel, factor) in &channels {
        let skip = ((span_start - channel.start_time_s) * channel.rate_hz).round() as usize;
        if skip >= channel.len() {
            return Err(Error::NoOverlap);
        }
        let trimmed = super::ChannelSeries::new(
            channel.name.clone(),
            channel.modality,
            channel.rate_hz,
            channel.samples[skip..].to_vec(),
            span_start,
        )?;
        let down = downsample(&trimmed, *factor, method)?;
        n_rows = n_rows.min(down.len());
        fused.push(down.samples);
    }
    if n_rows == 0 || n_rows == usize::MAX {
        return Err(Error::NoOverlap);
    }

    // Label each fused row by the midpoint of its period; drop unlabeled rows.
    let period = 1.0 / target_rate_hz;
    let mut kept_rows = Vec::with_capacity(n_rows);
    let mut labels = Vec::new();
    let mut interval_ids = Vec::new();
    for row in 0..n_rows {
        let t_mid = span_start + (row as f64 + 0.5) * period;
        if let Some((interval_idx, label)) = recording.label_at(t_mid) {
            kept_rows.push(row);
            labels.push(label);
            interval_ids.push(interval_idx);
        }
    }
    if kept_rows.is_empty() {
        return Err(Error::MalformedData(
            "no fused samples fall inside a label interval".into(),
        ));
    }

    let mut matrix = FeatureMatrix::zeros(
        selected.to_vec(),
        kept_rows.len(),
        labels,
        interval_ids,
        target_rate_hz,
    );
    for (col, samples) in fused.iter().enumerate() {
        for (out_row, &src_row) in kept_rows.iter().enumerate() {
            matrix.set(out_row, col, samples[src_row]);
        }
    }
    Ok(matrix)
}

/// Stacks matrices from several recordings, re-basing interval ids so they
/// stay unique across the result.
pub fn concat_matrices(matrices: &[FeatureMatrix]) -> Result<FeatureMatrix> {
    let first = matrices.first().ok_or(Error::EmptyDataset)?;
    let total_rows: usize = matrices.iter().map(|m| m.n_samples()).sum();
    let mut labels = Vec::with_capacity(total_rows);
    let mut interval_ids = Vec::with_capacity(total_rows);
    let mut values = Vec::with_capacity(total_rows * first.n_features());
    let mut id_base = 0usize;
    for matrix in matrices {
        if matrix.feature_names != first.feature_names {
            return Err(Error::MalformedData(
                "cannot concatenate matrices with different feature sets".into(),
            ));
        }
        if matrix.rate_hz != first.rate_hz {
            return Err(Error::MalformedData(
                "cannot concatenate matrices with different rates".into(),
            ));
        }
        labels.extend_from_slice(&matrix.labels);
        interval_ids.extend(matrix.interval_ids.iter().map(|id| id + id_base));
        values.extend_from_slice(&matrix.values);
        id_base += matrix.interval_ids.iter().max().map_or(0, |m| m + 1);
    }
    Ok(FeatureMatrix {
        feature_names: first.feature_names.clone(),
        values,
        labels,
        interval_ids,
        rate_hz: first.rate_hz,
    })
}
