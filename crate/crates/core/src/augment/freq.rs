use std::f64::consts::{PI, TAU};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsp::{analytic_signal, apply_fir, design_bandstop_capped, fft_complex, ifft_complex};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::window::EegWindow;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqShiftParams {
    /// Shifts are drawn from `U[-max_shift, max_shift]` Hz.
    pub max_shift: f64,
}

fn check_shift(w: &EegWindow, p: &FreqShiftParams) -> Result<()> {
    let limit = w.sfreq() / 4.0;
    if !(p.max_shift >= 0.0 && p.max_shift < limit) {
        return Err(Error::Param(format!(
            "max frequency shift {} Hz must be in [0, {limit}) Hz",
            p.max_shift
        )));
    }
    Ok(())
}

/// Translates every channel's spectrum by one shift drawn for the whole window.
pub fn frequency_shift(
    w: &EegWindow,
    p: &FreqShiftParams,
    rng: &mut RngStream,
) -> Result<EegWindow> {
    check_shift(w, p)?;
    let shift = rng.uniform_range(-p.max_shift, p.max_shift);
    shift_by(w, shift)
}

/// `Re(x_a(t) e^{2 pi i shift t})` per channel, with `x_a` the analytic signal.
pub fn shift_by(w: &EegWindow, shift: f64) -> Result<EegWindow> {
    let (c, t) = w.data().dim();
    let phase_step = TAU * shift / w.sfreq();
    let carrier: Vec<Complex64> = (0..t)
        .map(|i| Complex64::from_polar(1.0, phase_step * i as f64))
        .collect();
    let mut out = Array2::zeros((c, t));
    for (ch, mut dst) in out.rows_mut().into_iter().enumerate() {
        let a = analytic_signal(&w.row(ch))?;
        for ((d, z), e) in dst.iter_mut().zip(&a).zip(&carrier) {
            *d = (z * e).re;
        }
    }
    Ok(w.with_data(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMode {
    /// Each channel draws its own phases.
    #[default]
    Independent,
    /// One set of phases for every channel.
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateParams {
    /// Phase perturbations are drawn from `U[0, max_phase]` radians.
    pub max_phase: f64,
    pub channel_mode: ChannelMode,
}

/// Positive-frequency bins excluding DC and Nyquist.
fn n_free_bins(t: usize) -> usize {
    (t - 1) / 2
}

fn draw_phases(n: usize, max_phase: f64, rng: &mut RngStream) -> Vec<f64> {
    (0..n).map(|_| rng.uniform_range(0.0, max_phase)).collect()
}

/// Randomizes Fourier phases; magnitudes are untouched.
pub fn ft_surrogate(w: &EegWindow, p: &SurrogateParams, rng: &mut RngStream) -> Result<EegWindow> {
    if !(p.max_phase >= 0.0 && p.max_phase < 2.0 * PI) {
        return Err(Error::Param(format!(
            "max phase {} rad must be in [0, 2 pi)",
            p.max_phase
        )));
    }
    let bins = n_free_bins(w.n_samples());
    let phases: Vec<Vec<f64>> = match p.channel_mode {
        ChannelMode::Shared => vec![draw_phases(bins, p.max_phase, rng); w.n_channels()],
        ChannelMode::Independent => (0..w.n_channels())
            .map(|_| draw_phases(bins, p.max_phase, rng))
            .collect(),
    };
    ft_surrogate_with_phases(w, &phases)
}

/// Advances positive bin `k` (1-based) of channel `c` by `phases[c][k - 1]`;
/// the mirrored bin gets the conjugate rotation so the output stays real.
pub fn ft_surrogate_with_phases(w: &EegWindow, phases: &[Vec<f64>]) -> Result<EegWindow> {
    let (c, t) = w.data().dim();
    let bins = n_free_bins(t);
    if phases.len() != c || phases.iter().any(|p| p.len() != bins) {
        return Err(Error::Input(format!(
            "expected {c} phase vectors of length {bins}"
        )));
    }
    let mut out = Array2::zeros((c, t));
    let mut buf = vec![Complex64::new(0.0, 0.0); t];
    for (ch, mut dst) in out.rows_mut().into_iter().enumerate() {
        for (b, v) in buf.iter_mut().zip(w.data().row(ch)) {
            *b = Complex64::new(*v, 0.0);
        }
        fft_complex(&mut buf)?;
        for (k, &phi) in (1..=bins).zip(&phases[ch]) {
            let rot = Complex64::from_polar(1.0, phi);
            buf[k] *= rot;
            buf[t - k] *= rot.conj();
        }
        ifft_complex(&mut buf)?;
        for (d, b) in dst.iter_mut().zip(&buf) {
            *d = b.re;
        }
    }
    Ok(w.with_data(out))
}

/// Upper end of the band-stop centre distribution.
pub const BANDSTOP_CENTER_MAX_HZ: f64 = 38.0;
/// Gap kept between the stop band and 0 Hz / the top of the centre range.
pub const BANDSTOP_EDGE_MARGIN_HZ: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandstopParams {
    /// Stop-band width in Hz. Zero disables filtering.
    pub width: f64,
}

impl BandstopParams {
    /// Admissible centre range `[lo, hi]` for a given sampling rate.
    pub fn center_range(&self, sfreq: f64) -> Result<(f64, f64)> {
        let top = BANDSTOP_CENTER_MAX_HZ.min(sfreq / 2.0);
        let lo = self.width / 2.0 + BANDSTOP_EDGE_MARGIN_HZ;
        let hi = top - self.width / 2.0 - BANDSTOP_EDGE_MARGIN_HZ;
        if lo > hi {
            return Err(Error::Band(format!(
                "a {} Hz stop band does not fit below {top} Hz",
                self.width
            )));
        }
        Ok((lo, hi))
    }
}

/// Removes one randomly centred band from every channel.
///
/// The centre is drawn from `U[0, min(38, sfreq / 2)]` and clamped into
/// [`BandstopParams::center_range`].
pub fn bandstop_filter(
    w: &EegWindow,
    p: &BandstopParams,
    rng: &mut RngStream,
) -> Result<EegWindow> {
    if !(p.width >= 0.0 && p.width.is_finite()) {
        return Err(Error::Param(format!("band width must be >= 0, got {}", p.width)));
    }
    let (lo, hi) = p.center_range(w.sfreq())?;
    let top = BANDSTOP_CENTER_MAX_HZ.min(w.sfreq() / 2.0);
    let center = rng.uniform_range(0.0, top).clamp(lo, hi);
    bandstop_at(w, center, p.width)
}

/// Filters every channel with the same band-stop kernel, at most `T / 3` taps long.
pub fn bandstop_at(w: &EegWindow, center: f64, width: f64) -> Result<EegWindow> {
    if width == 0.0 {
        return Ok(w.clone());
    }
    let h = design_bandstop_capped(center, width, w.sfreq(), w.n_samples() / 3)?;
    let (c, t) = w.data().dim();
    let mut out = Array2::zeros((c, t));
    for (ch, mut dst) in out.rows_mut().into_iter().enumerate() {
        let y = apply_fir(&w.row(ch), &h)?;
        dst.iter_mut().zip(y).for_each(|(d, v)| *d = v);
    }
    Ok(w.with_data(out))
}
