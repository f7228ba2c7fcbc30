use super::fft::fft;
use crate::error::{Error, Result};

/// One-sided power spectral density estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
}

impl Periodogram {
    pub fn bin_width(&self) -> f64 {
        self.freqs.get(1).copied().unwrap_or(0.0)
    }

    pub fn argmax(&self) -> usize {
        self.power
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| {
                if p > best.1 {
                    (i, p)
                } else {
                    best
                }
            })
            .0
    }

    pub fn peak_frequency(&self) -> f64 {
        self.freqs[self.argmax()]
    }

    /// Sum of `power * df` over bins with `lo <= f < hi`.
    pub fn band_power(&self, lo: f64, hi: f64) -> f64 {
        let df = self.bin_width();
        self.freqs
            .iter()
            .zip(&self.power)
            .filter(|(f, _)| **f >= lo && **f < hi)
            .map(|(_, p)| p * df)
            .sum()
    }
}

/// `power[k] = |S[k]|^2 / (T sfreq)`, doubled except at DC and Nyquist, so that
/// `sum(power) * sfreq / T` equals the mean square of `x`.
pub fn periodogram(x: &[f64], sfreq: f64) -> Result<Periodogram> {
    let n = x.len();
    if n < 2 {
        return Err(Error::Size(format!("periodogram needs 2 samples, got {n}")));
    }
    let s = fft(x)?;
    let n_bins = n / 2 + 1;
    let norm = 1.0 / (n as f64 * sfreq);
    let mut power = Vec::with_capacity(n_bins);
    for (k, c) in s.iter().take(n_bins).enumerate() {
        let nyquist = n % 2 == 0 && k == n / 2;
        let scale = if k == 0 || nyquist { 1.0 } else { 2.0 };
        power.push(c.norm_sqr() * norm * scale);
    }
    let freqs = (0..n_bins).map(|k| k as f64 * sfreq / n as f64).collect();
    Ok(Periodogram { freqs, power })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn sine_on_a_bin_peaks_there() {
        let (n, sfreq) = (200, 100.0);
        let x: Vec<f64> = (0..n).map(|i| (TAU * 12.5 * i as f64 / sfreq).sin()).collect();
        let p = periodogram(&x, sfreq).unwrap();
        assert_eq!(p.peak_frequency(), 12.5);
    }

    #[test]
    fn odd_length_has_no_nyquist_bin() {
        let p = periodogram(&[1.0, -1.0, 2.0, 0.5, 3.0], 10.0).unwrap();
        assert_eq!(p.freqs.len(), 3);
    }
}
