//! Numerical kernels shared by the transforms. Everything here is a pure function.

mod analytic;
mod fft;
mod fir;
mod legendre;
mod periodogram;
mod rotation;
mod spline;

pub use analytic::analytic_signal;
pub use fft::{fft, fft_complex, ifft, ifft_complex, Spectrum};
pub use fir::{apply_fir, design_bandstop, design_bandstop_capped, frequency_response, Fir};
pub use legendre::{legendre_p, legendre_series};
pub use periodogram::{periodogram, Periodogram};
pub use rotation::{rotation, Axis, RotationMatrix};
pub use spline::{interpolation_matrix, SplineConfig, SplineModel};
