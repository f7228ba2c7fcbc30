use ndarray::Array2;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::window::EegWindow;

/// Adds i.i.d. `N(0, sigma^2)` noise, drawn channel by channel, sample by sample.
pub fn gaussian_noise(w: &EegWindow, sigma: f64, rng: &mut RngStream) -> Result<EegWindow> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Param(format!("noise std must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(w.clone());
    }
    let mut data = w.data().clone();
    for v in data.iter_mut() {
        *v += sigma * rng.normal();
    }
    Ok(w.with_data(data))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeMaskParams {
    /// Masked length in seconds.
    pub mask_len: f64,
    /// Sigmoid temperature in 1/s; `None` means `sfreq / 4` (a 4-sample transition scale).
    pub temperature: Option<f64>,
}

impl TimeMaskParams {
    pub fn new(mask_len: f64) -> Self {
        Self {
            mask_len,
            temperature: None,
        }
    }

    pub fn temperature_for(&self, sfreq: f64) -> f64 {
        self.temperature.unwrap_or(sfreq / 4.0)
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// `m(t) = s(lambda (t_cut - t)) + s(lambda (t - t_cut - dt))`, sampled at `t = i / sfreq`.
///
/// Close to 1 outside `[t_cut, t_cut + dt]` and close to 0 inside. Never above 1:
/// the second argument is the negated first minus `lambda * dt`.
pub fn time_mask(n: usize, sfreq: f64, t_cut: f64, mask_len: f64, temperature: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / sfreq;
            sigmoid(temperature * (t_cut - t)) + sigmoid(temperature * (t - t_cut - mask_len))
        })
        .collect()
}

fn check_mask(w: &EegWindow, p: &TimeMaskParams) -> Result<f64> {
    let lambda = p.temperature_for(w.sfreq());
    if !(p.mask_len >= 0.0 && p.mask_len <= w.duration()) {
        return Err(Error::Param(format!(
            "mask length {} s must be within [0, {}] s",
            p.mask_len,
            w.duration()
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Param(format!("mask temperature must be > 0, got {lambda}")));
    }
    Ok(lambda)
}

/// Smoothly zeroes `mask_len` seconds of every channel, starting at a uniform `t_cut`.
pub fn smooth_time_mask(
    w: &EegWindow,
    p: &TimeMaskParams,
    rng: &mut RngStream,
) -> Result<EegWindow> {
    check_mask(w, p)?;
    let t_cut = rng.uniform_range(0.0, w.duration() - p.mask_len);
    smooth_time_mask_at(w, p, t_cut)
}

/// Mask with a given onset (seconds from the window start).
pub fn smooth_time_mask_at(w: &EegWindow, p: &TimeMaskParams, t_cut: f64) -> Result<EegWindow> {
    let lambda = check_mask(w, p)?;
    let mask = time_mask(w.n_samples(), w.sfreq(), t_cut, p.mask_len, lambda);
    let mut data = w.data().clone();
    for mut row in data.rows_mut() {
        for (v, m) in row.iter_mut().zip(&mask) {
            *v *= m;
        }
    }
    Ok(w.with_data(data))
}

/// `out[c][t] = in[c][T - 1 - t]`.
pub fn time_reverse(w: &EegWindow) -> EegWindow {
    let (c, t) = w.data().dim();
    let src = w.data();
    w.with_data(Array2::from_shape_fn((c, t), |(i, j)| src[(i, t - 1 - j)]))
}

pub fn sign_flip(w: &EegWindow) -> EegWindow {
    w.with_data(w.data().mapv(|v| -v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    fn win(rows: &[Vec<f64>]) -> EegWindow {
        EegWindow::from_rows(rows, 100.0, 0).unwrap()
    }

    #[test]
    fn reverse_small() {
        let w = win(&[vec![1., 2., 3.], vec![4., 5., 6.]]);
        let r = time_reverse(&w);
        assert_eq!(r.row(0), vec![3., 2., 1.]);
        assert_eq!(r.row(1), vec![6., 5., 4.]);
        assert_eq!(time_reverse(&r), w);
    }

    #[test]
    fn flip_small() {
        let w = win(&[vec![1., -2.]]);
        assert_eq!(sign_flip(&w).row(0), vec![-1., 2.]);
        assert_eq!(sign_flip(&sign_flip(&w)), w);
    }

    #[test]
    fn zero_sigma_is_bitwise_identity() {
        let w = win(&[vec![1.5, -0.0, 3.25]]);
        let out = gaussian_noise(&w, 0.0, &mut derive_stream(1, 2, 3)).unwrap();
        assert_eq!(out.data().as_slice(), w.data().as_slice());
    }

    #[test]
    fn negative_sigma() {
        let w = win(&[vec![1., 2.]]);
        assert!(matches!(
            gaussian_noise(&w, -0.1, &mut derive_stream(0, 0, 0)),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn mask_longer_than_window() {
        let w = win(&[vec![0.0; 100]]);
        let err = smooth_time_mask(&w, &TimeMaskParams::new(1.5), &mut derive_stream(0, 0, 0));
        assert!(matches!(err, Err(Error::Param(_))));
    }

    #[test]
    fn zero_length_mask_is_one() {
        let m = time_mask(500, 100.0, 2.0, 0.0, 25.0);
        for v in m {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}
