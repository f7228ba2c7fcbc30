use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

thread_local! {
    // rustfft picks the same algorithm for a given size on a given machine, so
    // per-thread planners give bitwise identical results across threads.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Size("transform length must be positive".into()));
    }
    Ok(())
}

/// Unnormalized forward DFT in place: `S[k] = sum_n x[n] e^{-2 pi i k n / T}`.
pub fn fft_complex(buf: &mut [Complex64]) -> Result<()> {
    check_len(buf.len())?;
    plan(buf.len(), false).process(buf);
    Ok(())
}

/// Inverse DFT in place, scaled by `1/T`.
pub fn ifft_complex(buf: &mut [Complex64]) -> Result<()> {
    check_len(buf.len())?;
    plan(buf.len(), true).process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
    Ok(())
}

/// Forward DFT of a real signal. Bins run DC, positive, then negative frequencies.
pub fn fft(x: &[f64]) -> Result<Vec<Complex64>> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_complex(&mut buf)?;
    Ok(buf)
}

/// Inverse DFT keeping the real part.
pub fn ifft(spectrum: &[Complex64]) -> Result<Vec<f64>> {
    let mut buf = spectrum.to_vec();
    ifft_complex(&mut buf)?;
    Ok(buf.into_iter().map(|c| c.re).collect())
}

/// DFT bins of a real signal together with its sampling rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bins: Vec<Complex64>,
    pub sfreq: f64,
}

impl Spectrum {
    pub fn of(x: &[f64], sfreq: f64) -> Result<Self> {
        Ok(Self {
            bins: fft(x)?,
            sfreq,
        })
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Frequency in Hz of bin `k`, negative above Nyquist.
    pub fn frequency(&self, k: usize) -> f64 {
        let n = self.bins.len();
        let k = if 2 * k > n { k as f64 - n as f64 } else { k as f64 };
        k * self.sfreq / n as f64
    }

    pub fn to_signal(&self) -> Result<Vec<f64>> {
        ifft(&self.bins)
    }
}
