use crate::error::{Error, Result};
use crate::montage::Montage;
use crate::window::EegWindow;

/// Ordered windows sharing one shape and sampling rate, with subject and
/// session tags per window.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n_channels: usize,
    n_samples: usize,
    sfreq: f64,
    montage: Montage,
    windows: Vec<EegWindow>,
    subjects: Vec<u32>,
    sessions: Vec<u32>,
}

impl Dataset {
    pub fn new(
        montage: Montage,
        n_samples: usize,
        sfreq: f64,
        windows: Vec<EegWindow>,
        subjects: Vec<u32>,
        sessions: Vec<u32>,
    ) -> Result<Self> {
        let n_channels = montage.len();
        if n_channels < 1 || n_samples < 2 {
            return Err(Error::Size(format!(
                "dataset shape must be at least 1x2, got {n_channels}x{n_samples}"
            )));
        }
        if !(sfreq.is_finite() && sfreq > 0.0) {
            return Err(Error::Param(format!("sampling rate must be > 0, got {sfreq}")));
        }
        if subjects.len() != windows.len() || sessions.len() != windows.len() {
            return Err(Error::Input(format!(
                "{} windows but {} subject and {} session tags",
                windows.len(),
                subjects.len(),
                sessions.len()
            )));
        }
        for (i, w) in windows.iter().enumerate() {
            if w.n_channels() != n_channels || w.n_samples() != n_samples {
                return Err(Error::Size(format!(
                    "window {i} is {}x{}, dataset is {n_channels}x{n_samples}",
                    w.n_channels(),
                    w.n_samples()
                )));
            }
            if w.sfreq() != sfreq {
                return Err(Error::Data(format!(
                    "window {i} sampled at {} Hz, dataset at {sfreq} Hz",
                    w.sfreq()
                )));
            }
        }
        let d = Self {
            n_channels,
            n_samples,
            sfreq,
            montage,
            windows,
            subjects,
            sessions,
        };
        let k = d.n_classes();
        let mut present = vec![false; k];
        for w in &d.windows {
            present[w.label()] = true;
        }
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(Error::Data(format!(
                "labels must cover 0..{k} contiguously; class {missing} is absent"
            )));
        }
        Ok(d)
    }

    /// Subset by window indices, in the given order. Labels need not stay contiguous.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            n_channels: self.n_channels,
            n_samples: self.n_samples,
            sfreq: self.sfreq,
            montage: self.montage.clone(),
            windows: indices.iter().map(|&i| self.windows[i].clone()).collect(),
            subjects: indices.iter().map(|&i| self.subjects[i]).collect(),
            sessions: indices.iter().map(|&i| self.sessions[i]).collect(),
        }
    }

    /// Same metadata, new windows (shape-preserving transforms only).
    pub(crate) fn with_windows(&self, windows: Vec<EegWindow>) -> Self {
        debug_assert_eq!(windows.len(), self.windows.len());
        Self {
            windows,
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> Self {
        Self {
            n_channels: self.n_channels,
            n_samples: self.n_samples,
            sfreq: self.sfreq,
            montage: self.montage.clone(),
            windows: Vec::new(),
            subjects: self.subjects.clone(),
            sessions: self.sessions.clone(),
        }
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn sfreq(&self) -> f64 {
        self.sfreq
    }

    pub fn montage(&self) -> &Montage {
        &self.montage
    }

    pub fn windows(&self) -> &[EegWindow] {
        &self.windows
    }

    pub fn subjects(&self) -> &[u32] {
        &self.subjects
    }

    pub fn sessions(&self) -> &[u32] {
        &self.sessions
    }

    pub fn labels(&self) -> Vec<usize> {
        self.windows.iter().map(EegWindow::label).collect()
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// One more than the largest label (0 for an empty dataset).
    pub fn n_classes(&self) -> usize {
        self.windows.iter().map(|w| w.label() + 1).max().unwrap_or(0)
    }

    /// Distinct subject ids in ascending order.
    pub fn subject_ids(&self) -> Vec<u32> {
        let mut ids = self.subjects.clone();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}
