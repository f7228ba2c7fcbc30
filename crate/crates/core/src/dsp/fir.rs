use std::f64::consts::PI;

use num_complex::Complex64;

use super::fft::{fft_complex, ifft_complex};
use crate::error::{Error, Result};

/// Linear-phase FIR kernel (odd length, symmetric).
#[derive(Debug, Clone, PartialEq)]
pub struct Fir {
    pub taps: Vec<f64>,
}

impl Fir {
    pub fn unit_impulse() -> Self {
        Self { taps: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }
}

/// Hamming transition width is about 3.3 / L cycles per sample; we aim for a
/// transition of half the stop-band width.
fn natural_length(width: f64, sfreq: f64) -> usize {
    let l = (6.6 * sfreq / width).ceil() as usize;
    l | 1
}

fn check_band(center: f64, width: f64, sfreq: f64) -> Result<()> {
    let ok = width > 0.0
        && sfreq > 0.0
        && center - width / 2.0 > 0.0
        && center + width / 2.0 < sfreq / 2.0;
    if !ok || !(center.is_finite() && width.is_finite() && sfreq.is_finite()) {
        return Err(Error::Band(format!(
            "stop band {center} +/- {} Hz must lie inside (0, {}) Hz",
            width / 2.0,
            sfreq / 2.0
        )));
    }
    Ok(())
}

/// Windowed-sinc (Hamming) band-stop filter centred on `center` Hz.
pub fn design_bandstop(center: f64, width: f64, sfreq: f64) -> Result<Fir> {
    check_band(center, width, sfreq)?;
    Ok(windowed_bandstop(center, width, sfreq, natural_length(width, sfreq)))
}

/// Same design with the length capped at `max_taps` (rounded down to odd, at least 3).
pub fn design_bandstop_capped(center: f64, width: f64, sfreq: f64, max_taps: usize) -> Result<Fir> {
    check_band(center, width, sfreq)?;
    let cap = if max_taps % 2 == 0 { max_taps.saturating_sub(1) } else { max_taps };
    let len = natural_length(width, sfreq).min(cap.max(3));
    Ok(windowed_bandstop(center, width, sfreq, len))
}

fn windowed_bandstop(center: f64, width: f64, sfreq: f64, len: usize) -> Fir {
    debug_assert!(len % 2 == 1);
    let mid = len / 2;
    let f_lo = (center - width / 2.0) / sfreq;
    let f_hi = (center + width / 2.0) / sfreq;
    let mut taps = vec![0.0; len];
    let denom = (len - 1).max(1) as f64;
    for k in 0..=mid {
        let m = k as f64 - mid as f64;
        let bandpass = if k == mid {
            2.0 * (f_hi - f_lo)
        } else {
            ((2.0 * PI * f_hi * m).sin() - (2.0 * PI * f_lo * m).sin()) / (PI * m)
        };
        let window = 0.54 - 0.46 * (2.0 * PI * k as f64 / denom).cos();
        let delta = if k == mid { 1.0 } else { 0.0 };
        taps[k] = delta - bandpass * window;
        taps[len - 1 - k] = taps[k];
    }
    Fir { taps }
}

/// `H(f) = sum_k h[k] e^{-2 pi i f k / sfreq}` by direct summation.
pub fn frequency_response(h: &Fir, f: f64, sfreq: f64) -> Complex64 {
    let w = -2.0 * PI * f / sfreq;
    h.taps
        .iter()
        .enumerate()
        .map(|(k, &c)| Complex64::from_polar(c, w * k as f64))
        .sum()
}

fn reflect_pad(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n + 2 * pad);
    out.extend((1..=pad).rev().map(|i| x[i]));
    out.extend_from_slice(x);
    out.extend((1..=pad).map(|i| x[n - 1 - i]));
    out
}

const DIRECT_MAX_TAPS: usize = 64;

/// Zero-phase filtering: reflect-pad by `(L - 1) / 2`, convolve, keep the centred part.
pub fn apply_fir(x: &[f64], h: &Fir) -> Result<Vec<f64>> {
    let l = h.len();
    if l % 2 == 0 {
        return Err(Error::Size(format!("FIR length must be odd, got {l}")));
    }
    if x.len() <= l {
        return Err(Error::Size(format!(
            "signal of {} samples is not longer than the {l}-tap kernel",
            x.len()
        )));
    }
    let pad = l / 2;
    let padded = reflect_pad(x, pad);
    let n = x.len();
    if l <= DIRECT_MAX_TAPS {
        let out = (0..n)
            .map(|i| {
                h.taps
                    .iter()
                    .zip(&padded[i..i + l])
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        return Ok(out);
    }
    // Full linear convolution via one FFT of length len(padded) + L - 1.
    let size = padded.len() + l - 1;
    let mut a = vec![Complex64::new(0.0, 0.0); size];
    let mut b = vec![Complex64::new(0.0, 0.0); size];
    for (dst, &v) in a.iter_mut().zip(&padded) {
        dst.re = v;
    }
    for (dst, &v) in b.iter_mut().zip(&h.taps) {
        dst.re = v;
    }
    fft_complex(&mut a)?;
    fft_complex(&mut b)?;
    for (p, q) in a.iter_mut().zip(&b) {
        *p *= q;
    }
    ifft_complex(&mut a)?;
    // Symmetric kernel: full-convolution index i + L - 1 lines up with padded[i + pad].
    Ok(a[l - 1..l - 1 + n].iter().map(|c| c.re).collect())
}
