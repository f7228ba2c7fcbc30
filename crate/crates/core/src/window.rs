use ndarray::Array2;

use crate::error::{Error, Result};

/// One labelled multichannel epoch, channels by samples.
///
/// Row `c` corresponds to channel `c` of the owning dataset's montage.
#[derive(Debug, Clone, PartialEq)]
pub struct EegWindow {
    data: Array2<f64>,
    sfreq: f64,
    label: usize,
}

impl EegWindow {
    pub fn new(data: Array2<f64>, sfreq: f64, label: usize) -> Result<Self> {
        let (c, t) = data.dim();
        if c < 1 || t < 2 {
            return Err(Error::Size(format!(
                "window must have at least 1 channel and 2 samples, got {c}x{t}"
            )));
        }
        if !(sfreq.is_finite() && sfreq > 0.0) {
            return Err(Error::Param(format!("sampling rate must be > 0, got {sfreq}")));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite sample {v}")));
        }
        Ok(Self { data, sfreq, label })
    }

    /// Builds a window from rows of samples.
    pub fn from_rows(rows: &[Vec<f64>], sfreq: f64, label: usize) -> Result<Self> {
        let c = rows.len();
        let t = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != t) {
            return Err(Error::Size("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let data = Array2::from_shape_vec((c, t), flat).map_err(|e| Error::Size(e.to_string()))?;
        Self::new(data, sfreq, label)
    }

    /// Transforms produce finite output by construction, so they skip the scan.
    pub(crate) fn with_data(&self, data: Array2<f64>) -> Self {
        debug_assert_eq!(data.dim(), self.data.dim());
        Self {
            data,
            sfreq: self.sfreq,
            label: self.label,
        }
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<f64> {
        self.data
    }

    pub fn sfreq(&self) -> f64 {
        self.sfreq
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn n_channels(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.data.ncols()
    }

    /// Window length in seconds.
    pub fn duration(&self) -> f64 {
        self.n_samples() as f64 / self.sfreq
    }

    pub fn row(&self, c: usize) -> Vec<f64> {
        self.data.row(c).to_vec()
    }
}
