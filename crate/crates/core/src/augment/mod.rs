//! The thirteen transforms, grouped by the domain they act in.
//!
//! Stochastic transforms take the window's [`RngStream`](crate::RngStream)
//! and consume draws in a fixed order. Each also has a `*_by`/`*_at` variant
//! taking the drawn quantity explicitly.

pub mod freq;
pub mod spatial;
pub mod time;

pub use freq::{
    bandstop_at, bandstop_filter, frequency_shift, ft_surrogate, ft_surrogate_with_phases,
    shift_by, BandstopParams, ChannelMode, FreqShiftParams, SurrogateParams, BANDSTOP_CENTER_MAX_HZ,
    BANDSTOP_EDGE_MARGIN_HZ,
};
pub use spatial::{
    channels_dropout, channels_shuffle, channels_symmetry, rotate_sensors_by, sensors_rotation,
};
pub use time::{
    gaussian_noise, sign_flip, smooth_time_mask, smooth_time_mask_at, time_mask, time_reverse,
    TimeMaskParams,
};
