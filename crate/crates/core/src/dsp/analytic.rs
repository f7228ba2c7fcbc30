use num_complex::Complex64;

use super::fft::{fft_complex, ifft_complex};
use crate::error::{Error, Result};

/// Discrete analytic signal `x + i H(x)`.
///
/// The spectrum is multiplied by `[1, 2, ..., 2, 1 (Nyquist, even T), 0, ..., 0]`,
/// so negative-frequency bins are exactly zero before the inverse transform.
pub fn analytic_signal(x: &[f64]) -> Result<Vec<Complex64>> {
    let n = x.len();
    if n < 4 {
        return Err(Error::Size(format!(
            "analytic signal needs at least 4 samples, got {n}"
        )));
    }
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_complex(&mut buf)?;
    let half = n / 2;
    for (k, v) in buf.iter_mut().enumerate().skip(1) {
        if k < half || (k == half && n % 2 == 1) {
            *v *= 2.0;
        } else if k > half {
            *v = Complex64::new(0.0, 0.0);
        }
        // k == half with even n is the Nyquist bin: weight 1.
    }
    ifft_complex(&mut buf)?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::fft_complex;
    use std::f64::consts::TAU;

    #[test]
    fn cosine_becomes_complex_exponential() {
        let (n, sfreq, f) = (256, 64.0, 5.0);
        let x: Vec<f64> = (0..n).map(|i| (TAU * f * i as f64 / sfreq).cos()).collect();
        let a = analytic_signal(&x).unwrap();
        for (i, z) in a.iter().enumerate() {
            let t = i as f64 / sfreq;
            assert!((z.re - x[i]).abs() < 1e-9);
            assert!((z.im - (TAU * f * t).sin()).abs() < 1e-6);
        }
    }

    #[test]
    fn constant_input_has_zero_imaginary_part() {
        let a = analytic_signal(&[3.0; 17]).unwrap();
        for z in a {
            assert!((z.re - 3.0).abs() < 1e-12);
            assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn negative_frequencies_vanish() {
        for n in [4usize, 5, 64, 101] {
            let x: Vec<f64> = (0..n).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
            let mut s = analytic_signal(&x).unwrap();
            fft_complex(&mut s).unwrap();
            let total: f64 = s.iter().map(|c| c.norm_sqr()).sum();
            let neg: f64 = s[n / 2 + 1..].iter().map(|c| c.norm_sqr()).sum();
            assert!(neg / total < 1e-18, "n={n} ratio={}", neg / total);
        }
    }

    #[test]
    fn too_short() {
        assert!(matches!(analytic_signal(&[1.0, 2.0, 3.0]), Err(Error::Size(_))));
    }
}
