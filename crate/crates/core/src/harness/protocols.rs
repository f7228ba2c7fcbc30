use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::pipeline::{Policy, Transform, DEFAULT_P_AUG};

use super::classifier::{BaselineClassifier, TrainConfig};
use super::metrics::{metrics, relative_improvement};
use super::report::{ExperimentReport, ReportRow};
use super::split::{balance_classes, session_split, stratified_fraction, subject_folds, SplitPlan};

/// How windows are assigned to train and test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Splitter {
    /// Subject-disjoint k-fold cross-validation.
    #[default]
    SubjectFolds,
    /// One fold per subject, training on its first session.
    Session,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    pub folds: usize,
    /// Seed for fold assignment and subsampling.
    pub split_seed: u64,
    pub splitter: Splitter,
    /// Stratified cap on the number of training windows per fold.
    pub train_size: Option<usize>,
    pub train: TrainConfig,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            folds: 10,
            split_seed: 0,
            splitter: Splitter::SubjectFolds,
            train_size: None,
            train: TrainConfig::default(),
        }
    }
}

impl ProtocolConfig {
    fn plan(&self, d: &Dataset) -> Result<SplitPlan> {
        match self.splitter {
            Splitter::SubjectFolds => subject_folds(d, self.folds, self.split_seed),
            Splitter::Session => session_split(d),
        }
    }

    /// Training windows of one fold after the optional size cap, and the
    /// fraction of the fold's training split they represent.
    fn train_set(&self, d: &Dataset, train: &[usize], fold: usize) -> Result<(Dataset, f64)> {
        let full = d.select(train);
        match self.train_size {
            Some(n) if n < full.len() => {
                let f = n as f64 / full.len() as f64;
                Ok((stratified_fraction(&full, f, self.split_seed ^ fold as u64)?, f))
            }
            _ => Ok((full, 1.0)),
        }
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive, rounded to 1e-12.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let v = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (v * 1e12).round() / 1e12
            })
            .collect(),
    }
}

/// `2^-(n-1), ..., 1/2, 1`.
pub fn dyadic_fractions(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.5f64.powi((n - 1 - i) as i32)).collect()
}

fn train_and_score(
    train: &Dataset,
    test: &Dataset,
    policy: Option<&Policy>,
    cfg: &TrainConfig,
) -> Result<super::metrics::Metrics> {
    let clf = BaselineClassifier::train(train, policy, cfg)?;
    metrics(&test.labels(), &clf.predict(test)?)
}

fn single_magnitude(policy: &Policy) -> Option<f64> {
    match policy.specs.as_slice() {
        [spec] => spec.transform.magnitude(),
        _ => None,
    }
}

fn dataset_summary(d: &Dataset) -> serde_json::Value {
    json!({
        "n_windows": d.len(),
        "n_channels": d.n_channels(),
        "n_samples": d.n_samples(),
        "sfreq_hz": d.sfreq(),
        "n_classes": d.n_classes(),
        "n_subjects": d.subject_ids().len(),
    })
}

/// Relative balanced-accuracy improvement of each magnitude over the
/// un-augmented baseline, for every fold: `grid.len() * k` rows.
pub fn grid_search(
    d: &Dataset,
    aug: &str,
    grid: &[f64],
    cfg: &ProtocolConfig,
    policy_seed: u64,
) -> Result<ExperimentReport> {
    let policies = grid
        .iter()
        .map(|&m| {
            let p = Policy::single(Transform::from_magnitude(aug, m)?, DEFAULT_P_AUG, policy_seed);
            p.check_compatible(d.montage(), d.n_samples(), d.sfreq())?;
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let plan = cfg.plan(d)?;
    let sets = plan
        .folds
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let (train, frac) = cfg.train_set(d, &f.train, i)?;
            Ok((train, d.select(&f.test), frac))
        })
        .collect::<Result<Vec<_>>>()?;
    let baseline = sets
        .par_iter()
        .map(|(train, test, _)| train_and_score(train, test, None, &cfg.train))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|g| (0..sets.len()).map(move |f| (g, f)))
        .collect();
    let scores = cells
        .par_iter()
        .map(|&(g, f)| {
            let (train, test, _) = &sets[f];
            train_and_score(train, test, Some(&policies[g]), &cfg.train)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = ExperimentReport::new(
        "gridsearch",
        json!({
            "augmentation": aug,
            "grid": grid,
            "p_aug": DEFAULT_P_AUG,
            "policy_seed": policy_seed,
            "protocol": cfg,
            "dataset": dataset_summary(d),
        }),
    );
    for (&(g, f), m) in cells.iter().zip(&scores) {
        report.rows.push(ReportRow {
            protocol: "gridsearch".into(),
            augmentation: aug.to_string(),
            magnitude: Some(grid[g]),
            fraction: sets[f].2,
            fold: f,
            metric: "relative_improvement".into(),
            value: relative_improvement(baseline[f].balanced_accuracy, m.balanced_accuracy),
        });
    }
    Ok(report)
}

/// Balanced accuracy with and without `policy` over growing stratified
/// fractions of each fold's training split, on a fixed test fold.
///
/// Emits, per fraction and fold, a `baseline` row, an augmented row and a
/// `relative_improvement` row. A cell that cannot be built (for example a
/// fraction that empties a class) yields NaN rows and an entry in `errors`.
pub fn learning_curve(
    d: &Dataset,
    policy: &Policy,
    fractions: &[f64],
    cfg: &ProtocolConfig,
) -> Result<ExperimentReport> {
    if fractions.is_empty() || fractions.iter().any(|&f| !(f > 0.0 && f <= 1.0)) {
        return Err(Error::Config("fractions must be non-empty and lie in (0, 1]".into()));
    }
    if fractions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("fractions must be strictly ascending".into()));
    }
    policy.check_compatible(d.montage(), d.n_samples(), d.sfreq())?;
    let plan = cfg.plan(d)?;
    let label = policy.label();
    let magnitude = single_magnitude(policy);
    let cells: Vec<(usize, usize)> = (0..fractions.len())
        .flat_map(|a| (0..plan.folds.len()).map(move |f| (a, f)))
        .collect();
    let outcomes: Vec<Result<(f64, f64)>> = cells
        .par_iter()
        .map(|&(a, f)| {
            let fold = &plan.folds[f];
            let full = d.select(&fold.train);
            let seed = cfg.split_seed ^ ((f as u64) << 32);
            let train = stratified_fraction(&full, fractions[a], seed)?;
            let test = d.select(&fold.test);
            let base = train_and_score(&train, &test, None, &cfg.train)?;
            let aug = train_and_score(&train, &test, Some(policy), &cfg.train)?;
            Ok((base.balanced_accuracy, aug.balanced_accuracy))
        })
        .collect();

    let mut report = ExperimentReport::new(
        "learning-curve",
        json!({
            "policy": policy,
            "fractions": fractions,
            "protocol": cfg,
            "dataset": dataset_summary(d),
        }),
    );
    for (&(a, f), outcome) in cells.iter().zip(outcomes) {
        let (base, aug) = match outcome {
            Ok(v) => v,
            Err(e) => {
                report.errors.push(format!("fraction={}, fold={f}: {e}", fractions[a]));
                (f64::NAN, f64::NAN)
            }
        };
        let row = |augmentation: &str, metric: &str, value: f64| ReportRow {
            protocol: "learning-curve".into(),
            augmentation: augmentation.to_string(),
            magnitude,
            fraction: fractions[a],
            fold: f,
            metric: metric.to_string(),
            value,
        };
        report.rows.push(row("baseline", "balanced_accuracy", base));
        report.rows.push(row(&label, "balanced_accuracy", aug));
        report.rows.push(row(&label, "relative_improvement", relative_improvement(base, aug)));
    }
    Ok(report)
}

/// Per-class F1 with and without `policy` on class-balanced data.
///
/// Emits `K * k` rows per arm with metric `f1_class_<c>`, followed by the
/// matching `relative_improvement_f1_class_<c>` rows.
pub fn per_class_report(d: &Dataset, policy: &Policy, cfg: &ProtocolConfig) -> Result<ExperimentReport> {
    policy.check_compatible(d.montage(), d.n_samples(), d.sfreq())?;
    let k_classes = d.n_classes();
    let balanced = d.select(&balance_classes(&d.labels(), cfg.split_seed));
    let per_class = balanced.len() / k_classes.max(1);
    if per_class < cfg.folds {
        return Err(Error::Split(format!(
            "each class needs at least {} windows, the rarest has {per_class}",
            cfg.folds
        )));
    }
    let plan = cfg.plan(&balanced)?;
    let scores = plan
        .folds
        .par_iter()
        .enumerate()
        .map(|(i, fold)| {
            let (train, _) = cfg.train_set(&balanced, &fold.train, i)?;
            let test = balanced.select(&fold.test);
            let base = train_and_score(&train, &test, None, &cfg.train)?;
            let aug = train_and_score(&train, &test, Some(policy), &cfg.train)?;
            Ok((base.per_class_f1, aug.per_class_f1))
        })
        .collect::<Result<Vec<_>>>()?;

    let label = policy.label();
    let magnitude = single_magnitude(policy);
    let mut report = ExperimentReport::new(
        "per-class",
        json!({
            "policy": policy,
            "windows_per_class": per_class,
            "protocol": cfg,
            "dataset": dataset_summary(d),
        }),
    );
    let f1 = |v: &[f64], c: usize| v.get(c).copied().unwrap_or(0.0);
    let row = |augmentation: &str, fold: usize, metric: String, value: f64| ReportRow {
        protocol: "per-class".into(),
        augmentation: augmentation.to_string(),
        magnitude,
        fraction: 1.0,
        fold,
        metric,
        value,
    };
    for (fold, (base, _)) in scores.iter().enumerate() {
        for c in 0..k_classes {
            report.rows.push(row("baseline", fold, format!("f1_class_{c}"), f1(base, c)));
        }
    }
    for (fold, (_, aug)) in scores.iter().enumerate() {
        for c in 0..k_classes {
            report.rows.push(row(&label, fold, format!("f1_class_{c}"), f1(aug, c)));
        }
    }
    for (fold, (base, aug)) in scores.iter().enumerate() {
        for c in 0..k_classes {
            let value = relative_improvement(f1(base, c), f1(aug, c));
            report
                .rows
                .push(row(&label, fold, format!("relative_improvement_f1_class_{c}"), value));
        }
    }
    Ok(report)
}
