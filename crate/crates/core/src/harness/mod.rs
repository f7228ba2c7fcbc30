//! Desk-scale evaluation: synthetic data, subject-wise splits, a bandpower
//! classifier, and the three experiment protocols.

mod classifier;
mod metrics;
mod protocols;
mod report;
mod split;
mod synth;

pub use classifier::{band_features, BaselineClassifier, TrainConfig, FEATURE_BANDS};
pub use metrics::{metrics, relative_improvement, Metrics};
pub use protocols::{
    dyadic_fractions, grid_search, learning_curve, linspace, per_class_report, ProtocolConfig,
    Splitter,
};
pub use report::{Aggregate, ExperimentReport, ReportRow, CSV_HEADER};
pub use split::{
    VALIDATION_FRACTION,
    balance_classes, session_split, stratified_fraction, stratified_indices, subject_folds,
    FoldIndices, SplitPlan,
};
pub use synth::{generate_synthetic, SynthConfig};
