use std::collections::BTreeMap;

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::derive_stream;

const FOLD_STREAM: u64 = 0xf01d_5eed_0000_0002;
const STRATIFY_STREAM: u64 = 0x57a7_1f1e_0000_0003;
const BALANCE_STREAM: u64 = 0xba1a_4ce0_0000_0004;

/// Share of the non-test subjects held out for validation.
pub const VALIDATION_FRACTION: f64 = 0.2;

/// Window indices of one cross-validation fold, each list ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldIndices {
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
}

/// Subject-disjoint train/validation/test assignment for every fold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitPlan {
    pub k: usize,
    pub validation_fraction: f64,
    /// Subject ids dealt into each test fold.
    pub fold_subjects: Vec<Vec<u32>>,
    /// Validation subject ids for each test fold.
    pub valid_subjects: Vec<Vec<u32>>,
    pub folds: Vec<FoldIndices>,
}

fn indices_of(d: &Dataset, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    (0..d.len()).filter(|&i| keep(i)).collect()
}

/// Shuffles subjects with `seed` and deals them round-robin into `k` folds.
///
/// For each test fold, 20% of the remaining subjects (rounded, at least one)
/// are taken for validation from the front of the shuffled order; the rest
/// train.
pub fn subject_folds(d: &Dataset, k: usize, seed: u64) -> Result<SplitPlan> {
    let mut ids = d.subject_ids();
    if k < 2 {
        return Err(Error::Split(format!("need at least 2 folds, got {k}")));
    }
    if ids.len() < k {
        return Err(Error::Split(format!(
            "{} subjects cannot fill {k} folds",
            ids.len()
        )));
    }
    let mut rng = derive_stream(seed ^ FOLD_STREAM, 0, 0);
    rng.shuffle(&mut ids);
    let mut fold_subjects = vec![Vec::new(); k];
    for (i, &s) in ids.iter().enumerate() {
        fold_subjects[i % k].push(s);
    }
    let mut valid_subjects = Vec::with_capacity(k);
    let mut folds = Vec::with_capacity(k);
    for test in &fold_subjects {
        let rest: Vec<u32> = ids.iter().copied().filter(|s| !test.contains(s)).collect();
        let n_valid = ((rest.len() as f64 * VALIDATION_FRACTION).round() as usize).max(1);
        let n_valid = n_valid.min(rest.len().saturating_sub(1));
        let valid: Vec<u32> = rest[..n_valid].to_vec();
        let subj = d.subjects();
        folds.push(FoldIndices {
            train: indices_of(d, |i| {
                !test.contains(&subj[i]) && !valid.contains(&subj[i])
            }),
            valid: indices_of(d, |i| valid.contains(&subj[i])),
            test: indices_of(d, |i| test.contains(&subj[i])),
        });
        valid_subjects.push(valid);
    }
    Ok(SplitPlan {
        k,
        validation_fraction: VALIDATION_FRACTION,
        fold_subjects,
        valid_subjects,
        folds,
    })
}

/// One fold per subject: train on its first session, test on its second.
///
/// Subjects are taken in ascending id order; subjects lacking either session
/// are skipped. No validation set is formed.
pub fn session_split(d: &Dataset) -> Result<SplitPlan> {
    let subj = d.subjects();
    let sess = d.sessions();
    let mut fold_subjects = Vec::new();
    let mut folds = Vec::new();
    for s in d.subject_ids() {
        let mut sessions: Vec<u32> = (0..d.len())
            .filter(|&i| subj[i] == s)
            .map(|i| sess[i])
            .collect();
        sessions.sort_unstable();
        sessions.dedup();
        if sessions.len() < 2 {
            continue;
        }
        let (first, second) = (sessions[0], sessions[1]);
        fold_subjects.push(vec![s]);
        folds.push(FoldIndices {
            train: indices_of(d, |i| subj[i] == s && sess[i] == first),
            valid: Vec::new(),
            test: indices_of(d, |i| subj[i] == s && sess[i] == second),
        });
    }
    if folds.is_empty() {
        return Err(Error::Split("no subject has two sessions".into()));
    }
    Ok(SplitPlan {
        k: folds.len(),
        validation_fraction: 0.0,
        valid_subjects: vec![Vec::new(); folds.len()],
        fold_subjects,
        folds,
    })
}

fn by_class(labels: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    classes
}

/// Positions into `labels` keeping `round(f * n_c)` windows of each class
/// (ties away from zero), returned in ascending order.
pub fn stratified_indices(labels: &[usize], f: f64, seed: u64) -> Result<Vec<usize>> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::Stratify(format!("fraction must lie in (0, 1], got {f}")));
    }
    let mut keep = Vec::new();
    for (class, mut members) in by_class(labels) {
        let n = (f * members.len() as f64).round() as usize;
        if n == 0 {
            return Err(Error::Stratify(format!(
                "fraction {f} leaves class {class} ({} windows) empty",
                members.len()
            )));
        }
        let mut rng = derive_stream(seed ^ STRATIFY_STREAM, class as u64, 0);
        rng.shuffle(&mut members);
        keep.extend_from_slice(&members[..n]);
    }
    keep.sort_unstable();
    Ok(keep)
}

/// Class-stratified subsample of `d` keeping a fraction `f` of every class.
pub fn stratified_fraction(d: &Dataset, f: f64, seed: u64) -> Result<Dataset> {
    let keep = stratified_indices(&d.labels(), f, seed)?;
    Ok(d.select(&keep))
}

/// Positions into `labels` keeping the same number of windows, the size of
/// the rarest class, from every class, in ascending order.
pub fn balance_classes(labels: &[usize], seed: u64) -> Vec<usize> {
    let classes = by_class(labels);
    let n = classes.values().map(Vec::len).min().unwrap_or(0);
    let mut keep = Vec::with_capacity(n * classes.len());
    for (class, mut members) in classes {
        let mut rng = derive_stream(seed ^ BALANCE_STREAM, class as u64, 0);
        rng.shuffle(&mut members);
        keep.extend_from_slice(&members[..n]);
    }
    keep.sort_unstable();
    keep
}
