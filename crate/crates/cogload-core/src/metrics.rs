//! Multiclass evaluation: confusion matrix, accuracy, macro
//! precision/recall/F1 and one-vs-rest macro AUC.
//!
//! Precision, recall and F1 are macro-averaged over the three classes; AUC
//! is the one-vs-rest Mann-Whitney rank statistic (ties count one half),
//! macro-averaged over every class that has both positive and negative
//! samples. Undefined 0/0 ratios are reported as 0.

use serde::{Deserialize, Serialize};

use crate::class::{CognitiveClass, N_CLASSES};
use crate::error::{Error, Result};

/// 3x3 confusion counts; rows are true classes, columns predictions.
pub type Confusion = [[usize; N_CLASSES]; N_CLASSES];

/// Per-class precision/recall/F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Full evaluation of one model on one split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub confusion: Confusion,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc: f64,
    pub per_class: [ClassMetrics; N_CLASSES],
}

impl EvalReport {
    /// Builds the report from true classes and per-sample class probability
    /// rows (predictions are the argmax, ties to the lowest class).
    pub fn from_probabilities(
        truth: &[CognitiveClass],
        probabilities: &[[f64; N_CLASSES]],
    ) -> Result<EvalReport> {
        if truth.len() != probabilities.len() {
            return Err(Error::LengthMismatch {
                left: truth.len(),
                right: probabilities.len(),
            });
        }
        let predictions: Vec<CognitiveClass> = probabilities
            .iter()
            .map(|row| CognitiveClass::from_index(argmax(row)).unwrap())
            .collect();
        let confusion = confusion_matrix(truth, &predictions)?;
        let (precision, recall, f1, per_class) = prf1(&confusion);
        Ok(EvalReport {
            confusion,
            accuracy: accuracy(&confusion),
            precision,
            recall,
            f1,
            auc: roc_auc_ovr_macro(truth, probabilities)?,
            per_class,
        })
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in row.iter().enumerate().skip(1) {
        if *v > row[best] {
            best = i;
        }
    }
    best
}

/// Counts (true, predicted) pairs.
pub fn confusion_matrix(truth: &[CognitiveClass], pred: &[CognitiveClass]) -> Result<Confusion> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: pred.len(),
        });
    }
    let mut counts = [[0usize; N_CLASSES]; N_CLASSES];
    for (t, p) in truth.iter().zip(pred) {
        counts[t.index()][p.index()] += 1;
    }
    Ok(counts)
}

/// Trace over total.
pub fn accuracy(confusion: &Confusion) -> f64 {
    let total: usize = confusion.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let correct: usize = (0..N_CLASSES).map(|i| confusion[i][i]).sum();
    correct as f64 / total as f64
}

/// Macro precision/recall/F1 plus the per-class breakdown. 0/0 ratios are 0.
pub fn prf1(confusion: &Confusion) -> (f64, f64, f64, [ClassMetrics; N_CLASSES]) {
    let zero_safe = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let mut per_class = [ClassMetrics {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    }; N_CLASSES];
    for c in 0..N_CLASSES {
        let tp = confusion[c][c];
        let fp: usize = (0..N_CLASSES).filter(|t| *t != c).map(|t| confusion[t][c]).sum();
        let fn_: usize = (0..N_CLASSES).filter(|p| *p != c).map(|p| confusion[c][p]).sum();
        let precision = zero_safe(tp, tp + fp);
        let recall = zero_safe(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class[c] = ClassMetrics {
            precision,
            recall,
            f1,
        };
    }
    let macro_of = |f: fn(&ClassMetrics) -> f64| {
        per_class.iter().map(f).sum::<f64>() / N_CLASSES as f64
    };
    (
        macro_of(|m| m.precision),
        macro_of(|m| m.recall),
        macro_of(|m| m.f1),
        per_class,
    )
}

/// Binary AUC of `score` against boolean labels via average ranks
/// (Mann-Whitney; ties count one half). `None` when a class is missing.
fn binary_auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let n_pos = positive.iter().filter(|p| **p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|a, b| scores[*a].partial_cmp(&scores[*b]).unwrap());
    // Average rank within each tie group, 1-based.
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if positive[idx] {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

/// One-vs-rest AUC per class, macro-averaged over classes with both
/// positives and negatives.
pub fn roc_auc_ovr_macro(
    truth: &[CognitiveClass],
    probabilities: &[[f64; N_CLASSES]],
) -> Result<f64> {
    if truth.len() != probabilities.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: probabilities.len(),
        });
    }
    let mut sum = 0.0;
    let mut defined = 0usize;
    for c in 0..N_CLASSES {
        let scores: Vec<f64> = probabilities.iter().map(|row| row[c]).collect();
        let positive: Vec<bool> = truth.iter().map(|t| t.index() == c).collect();
        if let Some(auc) = binary_auc(&scores, &positive) {
            sum += auc;
            defined += 1;
        }
    }
    if defined == 0 {
        return Err(Error::UndefinedAuc);
    }
    Ok(sum / defined as f64)
}
