use ndarray::{Array1, Array2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::dsp::periodogram;
use crate::error::{Error, Result};
use crate::pipeline::{apply_policy, Policy};

/// Band edges in Hz; each band covers `lo <= f < hi`.
pub const FEATURE_BANDS: [(f64, f64); 5] =
    [(0.5, 4.0), (4.0, 8.0), (8.0, 13.0), (13.0, 30.0), (30.0, 38.0)];

const LOG_FLOOR: f64 = 1e-12;

/// Optimizer budget for the baseline classifier.
///
/// Training runs `epochs` passes; each pass draws a fresh augmentation of the
/// training set (policy epoch = pass index) and takes `steps_per_epoch`
/// full-batch gradient steps on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub steps_per_epoch: usize,
    pub learning_rate: f64,
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 10,
            steps_per_epoch: 20,
            learning_rate: 0.5,
            l2: 1e-3,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.steps_per_epoch == 0 {
            return Err(Error::Config("training needs at least one epoch and one step".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning rate must be > 0, got {}", self.learning_rate)));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::Config(format!("L2 strength must be >= 0, got {}", self.l2)));
        }
        Ok(())
    }
}

/// Log band power per channel and band, one row per window.
///
/// Columns are channel-major: column `c * 5 + b` holds band `b` of channel `c`.
pub fn band_features(d: &Dataset) -> Result<Array2<f64>> {
    let n_bands = FEATURE_BANDS.len();
    let n_features = d.n_channels() * n_bands;
    let rows = d
        .windows()
        .par_iter()
        .map(|w| {
            let mut row = Vec::with_capacity(n_features);
            for channel in w.data().rows() {
                let x: Vec<f64> = channel.to_vec();
                let p = periodogram(&x, w.sfreq())?;
                for &(lo, hi) in &FEATURE_BANDS {
                    row.push((LOG_FLOOR + p.band_power(lo, hi)).ln());
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(Array2::from_shape_vec((d.len(), n_features), flat).expect("rows have equal width"))
}

/// Multinomial logistic regression on standardized log band power.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineClassifier {
    n_classes: usize,
    feature_mean: Vec<f64>,
    feature_scale: Vec<f64>,
    /// `n_features x n_classes`.
    weights: Array2<f64>,
    bias: Vec<f64>,
}

fn softmax_rows(logits: &mut Array2<f64>) {
    for mut row in logits.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
}

fn argmax(row: ndarray::ArrayView1<f64>) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}

impl BaselineClassifier {
    /// Fits on `train`, augmenting it on the fly with `policy` when given.
    ///
    /// Standardization statistics come from the un-augmented training set.
    /// Samples are weighted inversely to their class frequency.
    pub fn train(train: &Dataset, policy: Option<&Policy>, cfg: &TrainConfig) -> Result<Self> {
        cfg.validate()?;
        let labels = train.labels();
        let k = train.n_classes();
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        let n_present = counts.iter().filter(|&&c| c > 0).count();
        if n_present < 2 {
            return Err(Error::Train(format!(
                "training set has {n_present} class(es); need at least 2"
            )));
        }
        if let Some(p) = policy {
            p.check_compatible(train.montage(), train.n_samples(), train.sfreq())?;
        }

        let clean = band_features(train)?;
        let n = clean.nrows() as f64;
        let feature_mean: Vec<f64> = clean.mean_axis(Axis(0)).expect("non-empty").to_vec();
        let feature_scale: Vec<f64> = clean
            .axis_iter(Axis(1))
            .zip(&feature_mean)
            .map(|(col, &m)| {
                let sd = (col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        let mut model = Self {
            n_classes: k,
            weights: Array2::zeros((clean.ncols(), k)),
            bias: vec![0.0; k],
            feature_mean,
            feature_scale,
        };

        let sample_weight: Array1<f64> = labels
            .iter()
            .map(|&l| labels.len() as f64 / (n_present as f64 * counts[l] as f64))
            .collect();
        let weight_sum = sample_weight.sum();
        let mut onehot = Array2::<f64>::zeros((labels.len(), k));
        for (i, &l) in labels.iter().enumerate() {
            onehot[[i, l]] = 1.0;
        }

        let clean_std = model.standardize(clean);
        for epoch in 0..cfg.epochs {
            let x = match policy {
                Some(p) => {
                    let aug = apply_policy(&p.with_epoch(epoch as u64), train)?;
                    model.standardize(band_features(&aug)?)
                }
                None => clean_std.clone(),
            };
            for _ in 0..cfg.steps_per_epoch {
                model.step(&x, &onehot, &sample_weight, weight_sum, cfg);
            }
        }
        Ok(model)
    }

    fn standardize(&self, mut x: Array2<f64>) -> Array2<f64> {
        for mut row in x.rows_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - self.feature_mean[j]) / self.feature_scale[j];
            }
        }
        x
    }

    fn logits(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut z = x.dot(&self.weights);
        for mut row in z.rows_mut() {
            row.iter_mut().zip(&self.bias).for_each(|(v, b)| *v += b);
        }
        z
    }

    fn step(
        &mut self,
        x: &Array2<f64>,
        onehot: &Array2<f64>,
        sample_weight: &Array1<f64>,
        weight_sum: f64,
        cfg: &TrainConfig,
    ) {
        let mut residual = self.logits(x);
        softmax_rows(&mut residual);
        residual -= onehot;
        for (mut row, &w) in residual.rows_mut().into_iter().zip(sample_weight) {
            row.mapv_inplace(|v| v * w / weight_sum);
        }
        let grad_w = x.t().dot(&residual) + &(&self.weights * cfg.l2);
        let grad_b = residual.sum_axis(Axis(0));
        self.weights.scaled_add(-cfg.learning_rate, &grad_w);
        self.bias
            .iter_mut()
            .zip(&grad_b)
            .for_each(|(b, g)| *b -= cfg.learning_rate * g);
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// Predicts from raw (unstandardized) band features.
    pub fn predict_features(&self, features: &Array2<f64>) -> Vec<usize> {
        let z = self.logits(&self.standardize(features.clone()));
        z.rows().into_iter().map(argmax).collect()
    }

    /// One label in `0..K` per window.
    pub fn predict(&self, d: &Dataset) -> Result<Vec<usize>> {
        let expected = self.feature_mean.len();
        if d.n_channels() * FEATURE_BANDS.len() != expected {
            return Err(Error::Input(format!(
                "classifier expects {} channels, dataset has {}",
                expected / FEATURE_BANDS.len(),
                d.n_channels()
            )));
        }
        Ok(self.predict_features(&band_features(d)?))
    }
}
