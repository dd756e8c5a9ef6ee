//! Segmentation of a fused matrix into fixed-length training windows.

use super::FeatureMatrix;
use crate::class::CognitiveClass;
use crate::error::{Error, Result};

/// One training window: `window_len` consecutive fused samples and a label.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    /// Row-major `window_len x n_features` block (time runs over rows).
    pub values: Vec<f64>,
    pub class: CognitiveClass,
}

/// Fixed-length multichannel windows, one label each.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset {
    pub windows: Vec<Window>,
    pub window_len: usize,
    pub stride: usize,
    pub n_features: usize,
}

impl WindowedDataset {
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Number of windows per class, indexed by class.
    pub fn class_counts(&self) -> [usize; crate::class::N_CLASSES] {
        let mut counts = [0usize; crate::class::N_CLASSES];
        for w in &self.windows {
            counts[w.class.index()] += 1;
        }
        counts
    }
}

/// Start offsets (into the matrix) of all windows, with their classes.
///
/// Windows are taken per label interval so no window straddles two
/// intervals; baseline intervals yield no windows. Per task interval the
/// window count is `floor((len - window_len) / stride) + 1`.
pub fn window_offsets(
    matrix: &FeatureMatrix,
    window_len: usize,
    stride: usize,
) -> Result<Vec<(usize, CognitiveClass)>> {
    if window_len == 0 || stride == 0 {
        return Err(Error::ConfigInvalid(
            "window length and stride must be at least 1".into(),
        ));
    }
    let mut offsets = Vec::new();
    let n = matrix.n_samples();
    let mut run_start = 0usize;
    while run_start < n {
        let interval = matrix.interval_ids[run_start];
        let mut run_end = run_start + 1;
        while run_end < n && matrix.interval_ids[run_end] == interval {
            run_end += 1;
        }
        if let Some(class) = matrix.labels[run_start].task_class() {
            let run_len = run_end - run_start;
            if run_len < window_len {
                return Err(Error::WindowTooLong {
                    interval_len: run_len,
                    window_len,
                });
            }
            let mut offset = run_start;
            while offset + window_len <= run_end {
                offsets.push((offset, class));
                offset += stride;
            }
        }
        run_start = run_end;
    }
    Ok(offsets)
}

/// Copies the window starting at `offset` out of the matrix.
pub fn extract_window(matrix: &FeatureMatrix, offset: usize, window_len: usize) -> Vec<f64> {
    let n_features = matrix.n_features();
    let mut values = Vec::with_capacity(window_len * n_features);
    for row in offset..offset + window_len {
        values.extend_from_slice(matrix.row(row));
    }
    values
}

/// Segments the matrix into windows (see [`window_offsets`] for the layout
/// rules).
pub fn segment_windows(
    matrix: &FeatureMatrix,
    window_len: usize,
    stride: usize,
) -> Result<WindowedDataset> {
    let offsets = window_offsets(matrix, window_len, stride)?;
    let windows = offsets
        .into_iter()
        .map(|(offset, class)| Window {
            values: extract_window(matrix, offset, window_len),
            class,
        })
        .collect();
    Ok(WindowedDataset {
        windows,
        window_len,
        stride,
        n_features: matrix.n_features(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::ConditionLabel;

    fn matrix_with_intervals(spans: &[(usize, ConditionLabel)]) -> FeatureMatrix {
        let mut labels = Vec::new();
        let mut ids = Vec::new();
        for (idx, (len, label)) in spans.iter().enumerate() {
            labels.extend(std::iter::repeat(*label).take(*len));
            ids.extend(std::iter::repeat(idx).take(*len));
        }
        let n = labels.len();
        let mut m = FeatureMatrix::zeros(vec!["f0".into()], n, labels, ids, 10.0);
        for i in 0..n {
            m.set(i, 0, i as f64);
        }
        m
    }

    #[test]
    fn exact_fit_yields_one_window() {
        let m = matrix_with_intervals(&[(10, ConditionLabel::Task(CognitiveClass::ZeroBack))]);
        let ds = segment_windows(&m, 10, 1).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.windows[0].values.len(), 10);
    }

    #[test]
    fn stride_enumeration_hand_case() {
        let m = matrix_with_intervals(&[(10, ConditionLabel::Task(CognitiveClass::OneBack))]);
        let offsets = window_offsets(&m, 4, 2).unwrap();
        let starts: Vec<usize> = offsets.iter().map(|(o, _)| *o).collect();
        assert_eq!(starts, vec![0, 2, 4, 6]);
    }

    #[test]
    fn short_interval_is_an_error() {
        let m = matrix_with_intervals(&[(3, ConditionLabel::Task(CognitiveClass::TwoBack))]);
        let err = segment_windows(&m, 4, 1).unwrap_err();
        assert!(matches!(
            err,
            Error::WindowTooLong {
                interval_len: 3,
                window_len: 4
            }
        ));
    }

    #[test]
    fn baseline_intervals_yield_no_windows() {
        let m = matrix_with_intervals(&[
            (6, ConditionLabel::Baseline),
            (8, ConditionLabel::Task(CognitiveClass::ZeroBack)),
        ]);
        let ds = segment_windows(&m, 4, 2).unwrap();
        assert_eq!(ds.len(), 3); // offsets 6, 8, 10 within the task run
        assert!(ds
            .windows
            .iter()
            .all(|w| w.class == CognitiveClass::ZeroBack));
    }

    #[test]
    fn windows_never_straddle_intervals() {
        let m = matrix_with_intervals(&[
            (7, ConditionLabel::Task(CognitiveClass::ZeroBack)),
            (7, ConditionLabel::Task(CognitiveClass::TwoBack)),
        ]);
        let offsets = window_offsets(&m, 5, 1).unwrap();
        for (offset, class) in offsets {
            // All rows of the window must carry the window's class.
            for row in offset..offset + 5 {
                assert_eq!(m.labels[row].task_class(), Some(class));
            }
        }
    }

    #[test]
    fn short_baseline_is_skipped_not_an_error() {
        let m = matrix_with_intervals(&[
            (2, ConditionLabel::Baseline),
            (6, ConditionLabel::Task(CognitiveClass::OneBack)),
        ]);
        let ds = segment_windows(&m, 5, 1).unwrap();
        assert_eq!(ds.len(), 2);
    }
}
