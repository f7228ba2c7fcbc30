use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    /// Mean recall over the classes present in the true labels.
    pub balanced_accuracy: f64,
    /// F1 per class `0..K`, where `K` covers both label vectors.
    pub per_class_f1: Vec<f64>,
    pub macro_f1: f64,
}

/// Classification scores from true and predicted labels.
pub fn metrics(truth: &[usize], pred: &[usize]) -> Result<Metrics> {
    if truth.len() != pred.len() {
        return Err(Error::Input(format!(
            "{} true labels but {} predictions",
            truth.len(),
            pred.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::Input("no labels to score".into()));
    }
    let k = truth.iter().chain(pred).max().map_or(0, |m| m + 1);
    let mut tp = vec![0usize; k];
    let mut n_true = vec![0usize; k];
    let mut n_pred = vec![0usize; k];
    for (&t, &p) in truth.iter().zip(pred) {
        n_true[t] += 1;
        n_pred[p] += 1;
        if t == p {
            tp[t] += 1;
        }
    }
    let present: Vec<usize> = (0..k).filter(|&c| n_true[c] > 0).collect();
    let balanced_accuracy = present
        .iter()
        .map(|&c| tp[c] as f64 / n_true[c] as f64)
        .sum::<f64>()
        / present.len() as f64;
    let per_class_f1: Vec<f64> = (0..k)
        .map(|c| {
            let denom = n_true[c] + n_pred[c];
            if denom == 0 {
                0.0
            } else {
                2.0 * tp[c] as f64 / denom as f64
            }
        })
        .collect();
    let macro_f1 = per_class_f1.iter().sum::<f64>() / k as f64;
    Ok(Metrics {
        balanced_accuracy,
        per_class_f1,
        macro_f1,
    })
}

/// `(augmented - baseline) / baseline`, or the plain difference when the
/// baseline is zero.
pub fn relative_improvement(baseline: f64, augmented: f64) -> f64 {
    if baseline == 0.0 {
        augmented - baseline
    } else {
        (augmented - baseline) / baseline
    }
}
