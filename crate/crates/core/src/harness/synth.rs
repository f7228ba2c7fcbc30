use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::dsp::ifft_complex;
use crate::error::{Error, Result};
use crate::montage::Montage;
use crate::rng::{derive_stream, RngStream};
use crate::window::EegWindow;

const SUBJECT_STREAM: u64 = 0x5b7e_c7a1_0000_0001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_classes: usize,
    pub n_per_class: usize,
    pub n_channels: usize,
    pub n_samples: usize,
    pub sfreq: f64,
    pub seed: u64,
    pub n_subjects: usize,
    /// Ratio of oscillation power to background power, in dB.
    pub snr_db: f64,
    /// Per-subject frequency offsets are drawn from `U[-jitter, jitter]` Hz.
    pub subject_jitter_hz: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_classes: 4,
            n_per_class: 100,
            n_channels: 22,
            n_samples: 256,
            sfreq: 128.0,
            seed: 0,
            n_subjects: 10,
            snr_db: -15.0,
            subject_jitter_hz: 0.5,
        }
    }
}

/// Amplitudes of the class rhythm and of its subharmonic.
const MAIN_AMPLITUDE: f64 = 1.0;
const SUB_AMPLITUDE: f64 = 0.6;

impl SynthConfig {
    /// Class rhythm frequencies, linearly spaced over 5..20 Hz.
    pub fn class_frequencies(&self) -> Vec<f64> {
        let k = self.n_classes;
        (0..k)
            .map(|i| 5.0 + 15.0 * i as f64 / (k - 1) as f64)
            .collect()
    }

    /// Frequency offset applied to every window of `subject`.
    pub fn subject_offset(&self, subject: usize) -> f64 {
        let mut rng = derive_stream(self.seed ^ SUBJECT_STREAM, subject as u64, 0);
        rng.uniform_range(-self.subject_jitter_hz, self.subject_jitter_hz)
    }

    fn validate(&self) -> Result<()> {
        if self.n_classes < 2 {
            return Err(Error::Config("need at least 2 classes".into()));
        }
        if self.n_channels < 2 {
            return Err(Error::Config("need at least 2 channels".into()));
        }
        if self.n_per_class == 0 || self.n_subjects == 0 {
            return Err(Error::Config("need at least one window per class and one subject".into()));
        }
        if self.n_samples < 8 {
            return Err(Error::Config("need at least 8 samples per window".into()));
        }
        let top = 20.0 + self.subject_jitter_hz;
        if !(self.sfreq > 2.0 * top) {
            return Err(Error::Config(format!(
                "sampling rate {} Hz cannot represent {top} Hz rhythms",
                self.sfreq
            )));
        }
        Ok(())
    }
}

/// 1/f background with unit variance: fixed amplitudes, random phases.
fn pink_noise(n: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut spec = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..=n / 2 {
        let amp = 1.0 / (k as f64).sqrt();
        let z = Complex64::from_polar(amp, TAU * rng.uniform());
        spec[k] = z;
        if k != n - k {
            spec[n - k] = z.conj();
        } else {
            spec[k] = Complex64::new(z.re, 0.0);
        }
    }
    ifft_complex(&mut spec).expect("non-empty");
    let x: Vec<f64> = spec.iter().map(|c| c.re).collect();
    let var = x.iter().map(|v| v * v).sum::<f64>() / n as f64;
    let scale = if var > 0.0 { 1.0 / var.sqrt() } else { 0.0 };
    x.into_iter().map(|v| v * scale).collect()
}

fn standardize(row: &mut [f64]) {
    let n = row.len() as f64;
    let mean = row.iter().sum::<f64>() / n;
    let var = row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let inv = if var > 0.0 { 1.0 / var.sqrt() } else { 1.0 };
    for v in row.iter_mut() {
        *v = (*v - mean) * inv;
    }
}

/// Labelled windows whose classes differ only by their dominant rhythm.
///
/// Class `k` carries a rhythm at `f_k` plus its subharmonic `f_k / 2`, with
/// random phases per channel, over a 1/f background. Window `i` has label
/// `i mod K`; blocks of `K` windows are dealt round-robin to subjects and the
/// session alternates on each full round. Each channel is z-scored.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<Dataset> {
    cfg.validate()?;
    let montage = Montage::standard_first(cfg.n_channels)?;
    let freqs = cfg.class_frequencies();
    let offsets: Vec<f64> = (0..cfg.n_subjects).map(|s| cfg.subject_offset(s)).collect();
    let signal_power = (MAIN_AMPLITUDE.powi(2) + SUB_AMPLITUDE.powi(2)) / 2.0;
    let noise_std = (signal_power / 10f64.powf(cfg.snr_db / 10.0)).sqrt();
    let n_windows = cfg.n_classes * cfg.n_per_class;
    let (c, t) = (cfg.n_channels, cfg.n_samples);

    let tags: Vec<(usize, u32, u32)> = (0..n_windows)
        .map(|i| {
            let block = i / cfg.n_classes;
            let subject = block % cfg.n_subjects;
            let session = (block / cfg.n_subjects) % 2;
            (i % cfg.n_classes, subject as u32, session as u32)
        })
        .collect();

    let windows = tags
        .par_iter()
        .enumerate()
        .map(|(i, &(label, subject, _))| {
            let mut rng = derive_stream(cfg.seed, i as u64, 0);
            let f = freqs[label] + offsets[subject as usize];
            let mut data = Array2::zeros((c, t));
            for mut row in data.rows_mut() {
                let phase_main = TAU * rng.uniform();
                let phase_sub = TAU * rng.uniform();
                let noise = pink_noise(t, &mut rng);
                let mut buf: Vec<f64> = (0..t)
                    .map(|n| {
                        let time = n as f64 / cfg.sfreq;
                        MAIN_AMPLITUDE * (TAU * f * time + phase_main).sin()
                            + SUB_AMPLITUDE * (TAU * 0.5 * f * time + phase_sub).sin()
                            + noise_std * noise[n]
                    })
                    .collect();
                standardize(&mut buf);
                row.iter_mut().zip(buf).for_each(|(d, v)| *d = v);
            }
            EegWindow::new(data, cfg.sfreq, label)
        })
        .collect::<Result<Vec<_>>>()?;
    let subjects = tags.iter().map(|t| t.1).collect();
    let sessions = tags.iter().map(|t| t.2).collect();
    Dataset::new(montage, t, cfg.sfreq, windows, subjects, sessions)
}
