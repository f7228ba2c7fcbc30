//! Deterministic EEG data augmentation.
//!
//! Thirteen label-preserving transforms over multichannel windows, a
//! probabilistic policy engine that applies them reproducibly in parallel,
//! and a small evaluation harness (grid search, learning curves, per-class
//! analysis) built around a synthetic data generator and a bandpower classifier.

pub mod augment;
pub mod dataset;
pub mod dsp;
pub mod eabf;
pub mod error;
pub mod harness;
pub mod montage;
pub mod pipeline;
pub mod rng;
pub mod window;

pub use ndarray;

pub use dataset::Dataset;
pub use eabf::{read_dataset, write_dataset};
pub use error::{Error, Result};
pub use montage::{symmetric_pairs, Montage, Pairing};
pub use pipeline::{apply_policy, preset, AugmentSpec, Policy, Transform};
pub use rng::{derive_stream, RngStream};
pub use window::EegWindow;
