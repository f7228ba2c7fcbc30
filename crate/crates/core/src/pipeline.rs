//! Probabilistic augmentation policies.
//!
//! For window `i` the stream `derive_stream(seed, i, epoch)` is consumed in a
//! fixed order: for each spec, one gate draw (`u < p_aug` applies it), then the
//! transform's own draws if it was applied.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{self, BandstopParams, ChannelMode, FreqShiftParams, SurrogateParams, TimeMaskParams};
use crate::dataset::Dataset;
use crate::dsp::Axis;
use crate::error::{Error, Result};
use crate::montage::Montage;
use crate::rng::{derive_stream, RngStream};
use crate::window::EegWindow;

/// A transform together with its magnitude parameter(s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Transform {
    GaussianNoise {
        sigma: f64,
    },
    SmoothTimeMask {
        mask_len_s: f64,
    },
    TimeReverse {},
    SignFlip {},
    FrequencyShift {
        max_shift_hz: f64,
    },
    FtSurrogate {
        max_phase_rad: f64,
        #[serde(default)]
        channel_mode: ChannelMode,
    },
    BandstopFilter {
        bandwidth_hz: f64,
    },
    ChannelsSymmetry {},
    ChannelsDropout {
        p_drop: f64,
    },
    ChannelsShuffle {
        p_shuffle: f64,
    },
    SensorsXRotation {
        max_degrees: f64,
    },
    SensorsYRotation {
        max_degrees: f64,
    },
    SensorsZRotation {
        max_degrees: f64,
    },
}

/// Every transform name, in a stable order.
pub const TRANSFORM_NAMES: [&str; 13] = [
    "gaussian-noise",
    "smooth-time-mask",
    "time-reverse",
    "sign-flip",
    "frequency-shift",
    "ft-surrogate",
    "bandstop-filter",
    "channels-symmetry",
    "channels-dropout",
    "channels-shuffle",
    "sensors-x-rotation",
    "sensors-y-rotation",
    "sensors-z-rotation",
];

/// Legal magnitude interval: `(lo, hi, hi_inclusive)`.
type Interval = (f64, f64, bool);

impl Transform {
    pub fn name(&self) -> &'static str {
        match self {
            Transform::GaussianNoise { .. } => "gaussian-noise",
            Transform::SmoothTimeMask { .. } => "smooth-time-mask",
            Transform::TimeReverse {} => "time-reverse",
            Transform::SignFlip {} => "sign-flip",
            Transform::FrequencyShift { .. } => "frequency-shift",
            Transform::FtSurrogate { .. } => "ft-surrogate",
            Transform::BandstopFilter { .. } => "bandstop-filter",
            Transform::ChannelsSymmetry {} => "channels-symmetry",
            Transform::ChannelsDropout { .. } => "channels-dropout",
            Transform::ChannelsShuffle { .. } => "channels-shuffle",
            Transform::SensorsXRotation { .. } => "sensors-x-rotation",
            Transform::SensorsYRotation { .. } => "sensors-y-rotation",
            Transform::SensorsZRotation { .. } => "sensors-z-rotation",
        }
    }

    /// The single magnitude parameter, if the transform has one.
    pub fn magnitude(&self) -> Option<f64> {
        match *self {
            Transform::GaussianNoise { sigma } => Some(sigma),
            Transform::SmoothTimeMask { mask_len_s } => Some(mask_len_s),
            Transform::FrequencyShift { max_shift_hz } => Some(max_shift_hz),
            Transform::FtSurrogate { max_phase_rad, .. } => Some(max_phase_rad),
            Transform::BandstopFilter { bandwidth_hz } => Some(bandwidth_hz),
            Transform::ChannelsDropout { p_drop } => Some(p_drop),
            Transform::ChannelsShuffle { p_shuffle } => Some(p_shuffle),
            Transform::SensorsXRotation { max_degrees }
            | Transform::SensorsYRotation { max_degrees }
            | Transform::SensorsZRotation { max_degrees } => Some(max_degrees),
            Transform::TimeReverse {} | Transform::SignFlip {} | Transform::ChannelsSymmetry {} => {
                None
            }
        }
    }

    /// Builds a transform from its name and magnitude (surrogates use independent channels).
    pub fn from_magnitude(name: &str, magnitude: f64) -> Result<Self> {
        let t = match name {
            "gaussian-noise" => Transform::GaussianNoise { sigma: magnitude },
            "smooth-time-mask" => Transform::SmoothTimeMask {
                mask_len_s: magnitude,
            },
            "frequency-shift" => Transform::FrequencyShift {
                max_shift_hz: magnitude,
            },
            "ft-surrogate" => Transform::FtSurrogate {
                max_phase_rad: magnitude,
                channel_mode: ChannelMode::Independent,
            },
            "bandstop-filter" => Transform::BandstopFilter {
                bandwidth_hz: magnitude,
            },
            "channels-dropout" => Transform::ChannelsDropout { p_drop: magnitude },
            "channels-shuffle" => Transform::ChannelsShuffle {
                p_shuffle: magnitude,
            },
            "sensors-x-rotation" => Transform::SensorsXRotation {
                max_degrees: magnitude,
            },
            "sensors-y-rotation" => Transform::SensorsYRotation {
                max_degrees: magnitude,
            },
            "sensors-z-rotation" => Transform::SensorsZRotation {
                max_degrees: magnitude,
            },
            "time-reverse" | "sign-flip" | "channels-symmetry" => {
                return Err(Error::Config(format!("{name} has no magnitude parameter")))
            }
            other => return Err(Error::Config(format!("unknown transform {other:?}"))),
        };
        Ok(t)
    }

    /// Searchable interval of the magnitude. Gaussian noise accepts any `sigma >= 0`.
    pub fn magnitude_interval(&self) -> Option<Interval> {
        let iv = match self {
            Transform::GaussianNoise { .. } => (0.0, f64::INFINITY, false),
            Transform::SmoothTimeMask { .. } => (0.0, 2.0, true),
            Transform::FrequencyShift { .. } => (0.0, 3.0, true),
            Transform::FtSurrogate { .. } => (0.0, 2.0 * PI, false),
            Transform::BandstopFilter { .. } => (0.0, 2.0, true),
            Transform::ChannelsDropout { .. } | Transform::ChannelsShuffle { .. } => {
                (0.0, 1.0, true)
            }
            Transform::SensorsXRotation { .. }
            | Transform::SensorsYRotation { .. }
            | Transform::SensorsZRotation { .. } => (0.0, 30.0, true),
            _ => return None,
        };
        Some(iv)
    }

    fn rotation_axis(&self) -> Option<Axis> {
        match self {
            Transform::SensorsXRotation { .. } => Some(Axis::X),
            Transform::SensorsYRotation { .. } => Some(Axis::Y),
            Transform::SensorsZRotation { .. } => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let (Some(m), Some((lo, hi, closed))) = (self.magnitude(), self.magnitude_interval()) {
            let ok = m >= lo && if closed { m <= hi } else { m < hi };
            if !ok {
                let close = if closed { ']' } else { ')' };
                return Err(Error::Config(format!(
                    "{}: magnitude {m} outside [{lo}, {hi}{close}",
                    self.name()
                )));
            }
        }
        Ok(())
    }

    /// Checks the transform can run on windows of this shape and montage.
    pub fn check_compatible(&self, montage: &Montage, n_samples: usize, sfreq: f64) -> Result<()> {
        self.validate()?;
        let duration = n_samples as f64 / sfreq;
        let name = self.name();
        let fail = |msg: String| Err(Error::Config(format!("{name}: {msg}")));
        match *self {
            Transform::SmoothTimeMask { mask_len_s } if mask_len_s > duration => {
                fail(format!("mask of {mask_len_s} s exceeds the {duration} s window"))
            }
            Transform::FrequencyShift { max_shift_hz } if max_shift_hz >= sfreq / 4.0 => fail(
                format!("shift {max_shift_hz} Hz must stay below sfreq/4 = {} Hz", sfreq / 4.0),
            ),
            Transform::FrequencyShift { .. } if n_samples < 4 => {
                fail("needs at least 4 samples".into())
            }
            Transform::BandstopFilter { bandwidth_hz } if bandwidth_hz > 0.0 => {
                let p = BandstopParams {
                    width: bandwidth_hz,
                };
                p.center_range(sfreq)
                    .map(|_| ())
                    .or_else(|e| fail(e.to_string()))?;
                if n_samples < 9 {
                    return fail("needs at least 9 samples".into());
                }
                Ok(())
            }
            Transform::ChannelsSymmetry {} => montage
                .pairing()
                .map(|_| ())
                .or_else(|e| fail(e.to_string())),
            _ if self.rotation_axis().is_some() => {
                if montage.positions().is_none() {
                    return fail("montage has no electrode positions".into());
                }
                if montage.len() < 3 {
                    return fail("needs at least 3 channels".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Runs the transform on one window, drawing from `rng` as needed.
    pub fn apply(&self, w: &EegWindow, montage: &Montage, rng: &mut RngStream) -> Result<EegWindow> {
        match *self {
            Transform::GaussianNoise { sigma } => augment::gaussian_noise(w, sigma, rng),
            Transform::SmoothTimeMask { mask_len_s } => {
                augment::smooth_time_mask(w, &TimeMaskParams::new(mask_len_s), rng)
            }
            Transform::TimeReverse {} => Ok(augment::time_reverse(w)),
            Transform::SignFlip {} => Ok(augment::sign_flip(w)),
            Transform::FrequencyShift { max_shift_hz } => augment::frequency_shift(
                w,
                &FreqShiftParams {
                    max_shift: max_shift_hz,
                },
                rng,
            ),
            Transform::FtSurrogate {
                max_phase_rad,
                channel_mode,
            } => augment::ft_surrogate(
                w,
                &SurrogateParams {
                    max_phase: max_phase_rad,
                    channel_mode,
                },
                rng,
            ),
            Transform::BandstopFilter { bandwidth_hz } => augment::bandstop_filter(
                w,
                &BandstopParams {
                    width: bandwidth_hz,
                },
                rng,
            ),
            Transform::ChannelsSymmetry {} => augment::channels_symmetry(w, montage),
            Transform::ChannelsDropout { p_drop } => augment::channels_dropout(w, p_drop, rng),
            Transform::ChannelsShuffle { p_shuffle } => {
                augment::channels_shuffle(w, p_shuffle, rng)
            }
            Transform::SensorsXRotation { max_degrees }
            | Transform::SensorsYRotation { max_degrees }
            | Transform::SensorsZRotation { max_degrees } => {
                let axis = self.rotation_axis().expect("rotation variant");
                augment::sensors_rotation(w, montage, axis, max_degrees, rng)
            }
        }
    }
}

/// A transform with its per-window application probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentSpec {
    #[serde(flatten)]
    pub transform: Transform,
    pub p_aug: f64,
}

impl AugmentSpec {
    pub fn new(transform: Transform, p_aug: f64) -> Self {
        Self { transform, p_aug }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_aug) {
            return Err(Error::Config(format!(
                "{}: p_aug {} outside [0, 1]",
                self.transform.name(),
                self.p_aug
            )));
        }
        self.transform.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub seed: u64,
    #[serde(default)]
    pub epoch: u64,
    pub specs: Vec<AugmentSpec>,
}

impl Policy {
    pub fn new(seed: u64, specs: Vec<AugmentSpec>) -> Self {
        Self {
            seed,
            epoch: 0,
            specs,
        }
    }

    /// A policy that never changes anything.
    pub fn identity(seed: u64) -> Self {
        Self::new(seed, Vec::new())
    }

    pub fn single(transform: Transform, p_aug: f64, seed: u64) -> Self {
        Self::new(seed, vec![AugmentSpec::new(transform, p_aug)])
    }

    pub fn with_epoch(&self, epoch: u64) -> Self {
        Self {
            epoch,
            ..self.clone()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Policy =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("bad policy JSON: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("policy serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.specs.iter().try_for_each(AugmentSpec::validate)
    }

    /// Validation against a concrete data shape; all errors are `Config`.
    pub fn check_compatible(&self, montage: &Montage, n_samples: usize, sfreq: f64) -> Result<()> {
        for s in &self.specs {
            s.validate()?;
            s.transform.check_compatible(montage, n_samples, sfreq)?;
        }
        Ok(())
    }

    /// Short human-readable label (transform names joined by `+`).
    pub fn label(&self) -> String {
        if self.specs.is_empty() {
            return "none".into();
        }
        self.specs
            .iter()
            .map(|s| s.transform.name())
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Augments one window; also reports which specs fired.
    pub fn augment_window(
        &self,
        w: &EegWindow,
        window_index: u64,
        montage: &Montage,
    ) -> Result<(EegWindow, Vec<bool>)> {
        let mut rng = derive_stream(self.seed, window_index, self.epoch);
        let mut current: Option<EegWindow> = None;
        let mut fired = Vec::with_capacity(self.specs.len());
        for spec in &self.specs {
            let apply = rng.uniform() < spec.p_aug;
            fired.push(apply);
            if apply {
                let input = current.as_ref().unwrap_or(w);
                current = Some(spec.transform.apply(input, montage, &mut rng)?);
            }
        }
        Ok((current.unwrap_or_else(|| w.clone()), fired))
    }
}

/// Applies the policy to every window (in parallel on the current rayon pool).
/// Labels, tags and order are preserved; the input is not modified.
pub fn apply_policy(policy: &Policy, d: &Dataset) -> Result<Dataset> {
    policy.check_compatible(d.montage(), d.n_samples(), d.sfreq())?;
    let windows = d
        .windows()
        .par_iter()
        .enumerate()
        .map(|(i, w)| policy.augment_window(w, i as u64, d.montage()).map(|(w, _)| w))
        .collect::<Result<Vec<_>>>()?;
    Ok(d.with_windows(windows))
}

/// Best magnitudes for one task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetValues {
    pub sigma: f64,
    pub mask_len_s: f64,
    pub bandwidth_hz: f64,
    pub max_phase_rad: f64,
    pub max_shift_hz: f64,
    pub p_drop: f64,
    pub p_shuffle: f64,
    /// Rotation ranges for the X, Y and Z axes, in degrees.
    pub rotation_deg: [f64; 3],
    pub channel_mode: ChannelMode,
}

/// Default probability of augmenting a window.
pub const DEFAULT_P_AUG: f64 = 0.5;

pub fn preset_values(name: &str) -> Result<PresetValues> {
    match name {
        "sleep" => Ok(PresetValues {
            sigma: 0.12,
            mask_len_s: 2.0,
            bandwidth_hz: 1.2,
            max_phase_rad: 0.9 * PI,
            max_shift_hz: 0.3,
            p_drop: 0.4,
            p_shuffle: 0.8,
            rotation_deg: [25.0, 9.0, 30.0],
            channel_mode: ChannelMode::Independent,
        }),
        "bci" => Ok(PresetValues {
            sigma: 0.16,
            mask_len_s: 1.6,
            bandwidth_hz: 0.4,
            max_phase_rad: 0.9 * PI,
            max_shift_hz: 2.7,
            p_drop: 1.0,
            p_shuffle: 0.1,
            rotation_deg: [3.0, 12.0, 3.0],
            channel_mode: ChannelMode::Shared,
        }),
        other => Err(Error::Config(format!(
            "unknown preset {other:?} (expected sleep or bci)"
        ))),
    }
}

impl PresetValues {
    /// The tuned transform for `name`.
    pub fn transform(&self, name: &str) -> Result<Transform> {
        let t = match name {
            "gaussian-noise" => Transform::GaussianNoise { sigma: self.sigma },
            "smooth-time-mask" => Transform::SmoothTimeMask {
                mask_len_s: self.mask_len_s,
            },
            "time-reverse" => Transform::TimeReverse {},
            "sign-flip" => Transform::SignFlip {},
            "frequency-shift" => Transform::FrequencyShift {
                max_shift_hz: self.max_shift_hz,
            },
            "ft-surrogate" => Transform::FtSurrogate {
                max_phase_rad: self.max_phase_rad,
                channel_mode: self.channel_mode,
            },
            "bandstop-filter" => Transform::BandstopFilter {
                bandwidth_hz: self.bandwidth_hz,
            },
            "channels-symmetry" => Transform::ChannelsSymmetry {},
            "channels-dropout" => Transform::ChannelsDropout {
                p_drop: self.p_drop,
            },
            "channels-shuffle" => Transform::ChannelsShuffle {
                p_shuffle: self.p_shuffle,
            },
            "sensors-x-rotation" => Transform::SensorsXRotation {
                max_degrees: self.rotation_deg[0],
            },
            "sensors-y-rotation" => Transform::SensorsYRotation {
                max_degrees: self.rotation_deg[1],
            },
            "sensors-z-rotation" => Transform::SensorsZRotation {
                max_degrees: self.rotation_deg[2],
            },
            other => return Err(Error::Config(format!("unknown transform {other:?}"))),
        };
        Ok(t)
    }
}

/// All thirteen transforms at the task's best magnitudes, each gated at `p_aug = 0.5`.
pub fn preset(name: &str) -> Result<Policy> {
    let values = preset_values(name)?;
    let specs = TRANSFORM_NAMES
        .iter()
        .map(|n| Ok(AugmentSpec::new(values.transform(n)?, DEFAULT_P_AUG)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Policy::new(0, specs))
}
