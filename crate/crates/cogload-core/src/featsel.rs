//! One-way ANOVA feature ranking and Pearson correlation mapping.

use std::cmp::Ordering;

use crate::class::CognitiveClass;
use crate::error::{Error, Result};
use crate::signal::FeatureMatrix;

/// Relative threshold below which a sum of squares counts as zero, measured
/// against the total sum of squares.
const SS_EPS: f64 = 1e-12;

/// Ranked features, descending by F-statistic. Perfectly separable features
/// carry an infinite F and sort above all finite values; ties break by
/// ascending name.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub entries: Vec<(String, f64)>,
}

impl FeatureRanking {
    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// Pairwise Pearson correlations with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap {
    pub names: Vec<String>,
    /// Row-major n x n.
    pub matrix: Vec<f64>,
}

impl CorrelationMap {
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n() + j]
    }
}

/// One-way ANOVA F-statistic of `values` grouped by `labels`.
///
/// `F = [SSB / (k-1)] / [SSW / (n-k)]`. Returns `f64::INFINITY` when the
/// within-group variation vanishes while groups differ, and `0` when the
/// group means coincide. Sums of squares are compared against the total sum
/// of squares to absorb floating-point residue.
pub fn anova_f(values: &[f64], labels: &[CognitiveClass]) -> Result<f64> {
    if values.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: labels.len(),
        });
    }
    let mut sums = [0.0f64; crate::class::N_CLASSES];
    let mut counts = [0usize; crate::class::N_CLASSES];
    for (v, label) in values.iter().zip(labels) {
        sums[label.index()] += v;
        counts[label.index()] += 1;
    }
    let k = counts.iter().filter(|c| **c > 0).count();
    let n = values.len();
    if k < 2 {
        return Err(Error::DegenerateGroups {
            reason: format!("need at least 2 groups, got {k}"),
        });
    }
    if n <= k {
        return Err(Error::DegenerateGroups {
            reason: format!("need more samples ({n}) than groups ({k})"),
        });
    }

    let grand_mean = values.iter().sum::<f64>() / n as f64;
    let group_mean = |g: usize| sums[g] / counts[g] as f64;

    let mut ss_between = 0.0;
    for g in 0..crate::class::N_CLASSES {
        if counts[g] > 0 {
            let d = group_mean(g) - grand_mean;
            ss_between += counts[g] as f64 * d * d;
        }
    }
    let mut ss_within = 0.0;
    let mut ss_total = 0.0;
    for (v, label) in values.iter().zip(labels) {
        let dw = v - group_mean(label.index());
        ss_within += dw * dw;
        let dt = v - grand_mean;
        ss_total += dt * dt;
    }

    let eps = SS_EPS * ss_total;
    if ss_between <= eps {
        return Ok(0.0);
    }
    if ss_within <= eps {
        return Ok(f64::INFINITY);
    }
    let ms_between = ss_between / (k - 1) as f64;
    let ms_within = ss_within / (n - k) as f64;
    Ok(ms_between / ms_within)
}

fn task_rows(matrix: &FeatureMatrix) -> (Vec<usize>, Vec<CognitiveClass>) {
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    for (i, label) in matrix.labels.iter().enumerate() {
        if let Some(class) = label.task_class() {
            rows.push(i);
            classes.push(class);
        }
    }
    (rows, classes)
}

/// Ranks every column of the matrix by its ANOVA F against the task classes.
/// Baseline rows are excluded from the comparison.
pub fn rank_features(matrix: &FeatureMatrix) -> Result<FeatureRanking> {
    let (rows, classes) = task_rows(matrix);
    let mut entries: Vec<(String, f64)> = Vec::with_capacity(matrix.n_features());
    for (col, name) in matrix.feature_names.iter().enumerate() {
        let values: Vec<f64> = rows.iter().map(|&i| matrix.get(i, col)).collect();
        let f = anova_f(&values, &classes)?;
        entries.push((name.clone(), f));
    }
    entries.sort_by(|a, b| match b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal) {
        Ordering::Equal => a.0.cmp(&b.0),
        other => other,
    });
    Ok(FeatureRanking { entries })
}

/// First `k` names of the ranking.
pub fn select_top_k(ranking: &FeatureRanking, k: usize) -> Result<Vec<String>> {
    if k == 0 || k > ranking.entries.len() {
        return Err(Error::KOutOfRange {
            k,
            max: ranking.entries.len(),
        });
    }
    Ok(ranking.entries[..k].iter().map(|(n, _)| n.clone()).collect())
}

/// Pearson correlation between every pair of columns. Constant columns
/// correlate 0 with everything else; the diagonal is exactly 1.
pub fn correlation_matrix(matrix: &FeatureMatrix) -> Result<CorrelationMap> {
    let n_samples = matrix.n_samples();
    if n_samples < 2 {
        return Err(Error::EmptyMatrix {
            got: n_samples,
            needed: 2,
        });
    }
    let n_features = matrix.n_features();
    let mut means = vec![0.0; n_features];
    for j in 0..n_features {
        means[j] = (0..n_samples).map(|i| matrix.get(i, j)).sum::<f64>() / n_samples as f64;
    }
    let mut centered: Vec<Vec<f64>> = Vec::with_capacity(n_features);
    for j in 0..n_features {
        centered.push((0..n_samples).map(|i| matrix.get(i, j) - means[j]).collect());
    }
    let norms: Vec<f64> = centered
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let constant: Vec<bool> = norms
        .iter()
        .zip(&means)
        .map(|(norm, mean)| {
            let std = norm / (n_samples as f64).sqrt();
            std <= 1e-9 * mean.abs().max(1.0)
        })
        .collect();

    let mut out = vec![0.0; n_features * n_features];
    for i in 0..n_features {
        out[i * n_features + i] = 1.0;
        for j in (i + 1)..n_features {
            let r = if constant[i] || constant[j] {
                0.0
            } else {
                let dot: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
                (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0)
            };
            out[i * n_features + j] = r;
            out[j * n_features + i] = r;
        }
    }
    Ok(CorrelationMap {
        names: matrix.feature_names.clone(),
        matrix: out,
    })
}
