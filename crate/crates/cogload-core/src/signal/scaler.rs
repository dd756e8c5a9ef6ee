//! Per-feature standardization to zero mean and unit standard deviation.

use serde::{Deserialize, Serialize};

use super::FeatureMatrix;
use crate::error::{Error, Result};

/// Threshold below which a column counts as constant, relative to its
/// magnitude.
const CONSTANT_STD_EPS: f64 = 1e-9;

/// Fitted standardization parameters.
///
/// Standard deviation is the population form (divide by n). Columns whose
/// std falls below `CONSTANT_STD_EPS * max(1, |mean|)` are flagged constant
/// and map to zero when applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub constant: Vec<bool>,
}

impl ScalerParams {
    pub fn n_features(&self) -> usize {
        self.means.len()
    }
}

/// Fits means and population standard deviations per column.
pub fn fit_scaler(matrix: &FeatureMatrix) -> Result<ScalerParams> {
    fit_scaler_rows(matrix, None)
}

/// Like [`fit_scaler`] but restricted to the rows selected by `mask`
/// (`mask[i]` true keeps row `i`). Used to fit on the training split only.
pub fn fit_scaler_rows(matrix: &FeatureMatrix, mask: Option<&[bool]>) -> Result<ScalerParams> {
    let n_features = matrix.n_features();
    let rows: Vec<usize> = match mask {
        Some(mask) => {
            if mask.len() != matrix.n_samples() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.n_samples(),
                    got: mask.len(),
                });
            }
            (0..matrix.n_samples()).filter(|i| mask[*i]).collect()
        }
        None => (0..matrix.n_samples()).collect(),
    };
    if rows.len() < 2 {
        return Err(Error::EmptyMatrix {
            got: rows.len(),
            needed: 2,
        });
    }

    let n = rows.len() as f64;
    let mut means = vec![0.0; n_features];
    let mut stds = vec![0.0; n_features];
    let mut constant = vec![false; n_features];
    for j in 0..n_features {
        let mut sum = 0.0;
        for &i in &rows {
            sum += matrix.get(i, j);
        }
        let mean = sum / n;
        let mut sq = 0.0;
        for &i in &rows {
            let d = matrix.get(i, j) - mean;
            sq += d * d;
        }
        let std = (sq / n).sqrt();
        means[j] = mean;
        stds[j] = std;
        constant[j] = std <= CONSTANT_STD_EPS * mean.abs().max(1.0);
    }
    Ok(ScalerParams {
        means,
        stds,
        constant,
    })
}

/// Applies `(x - mean) / std` per column; constant columns map to zero.
pub fn apply_scaler(matrix: &FeatureMatrix, params: &ScalerParams) -> Result<FeatureMatrix> {
    if params.n_features() != matrix.n_features() {
        return Err(Error::DimensionMismatch {
            expected: matrix.n_features(),
            got: params.n_features(),
        });
    }
    let mut out = matrix.clone();
    for i in 0..out.n_samples() {
        for j in 0..out.n_features() {
            let v = if params.constant[j] {
                0.0
            } else {
                (matrix.get(i, j) - params.means[j]) / params.stds[j]
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}
