//! EABF v1 container.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "EABF"
//! 4       4     version, u32 little-endian (= 1)
//! 8       8     header length H, u64 little-endian
//! 16      H     UTF-8 JSON header
//! 16+H    ...   f32 little-endian payload, window-major, then channel, then time
//! ```
//!
//! Samples are stored as `f32`; values read back are exactly representable,
//! so a read followed by a write reproduces the payload bit for bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::montage::Montage;
use crate::window::EegWindow;

pub const MAGIC: &[u8; 4] = b"EABF";
pub const VERSION: u32 = 1;
const PREAMBLE: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub n_windows: usize,
    pub n_channels: usize,
    pub n_samples: usize,
    pub sfreq_hz: f64,
    pub channel_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_positions: Option<Vec<[f64; 3]>>,
    pub labels: Vec<usize>,
    pub subjects: Vec<u32>,
    pub sessions: Vec<u32>,
}

impl Header {
    pub fn of(d: &Dataset) -> Self {
        Self {
            n_windows: d.len(),
            n_channels: d.n_channels(),
            n_samples: d.n_samples(),
            sfreq_hz: d.sfreq(),
            channel_names: d.montage().names().to_vec(),
            channel_positions: d.montage().positions().map(<[_]>::to_vec),
            labels: d.labels(),
            subjects: d.subjects().to_vec(),
            sessions: d.sessions().to_vec(),
        }
    }

    fn payload_len(&self) -> Option<usize> {
        self.n_windows
            .checked_mul(self.n_channels)?
            .checked_mul(self.n_samples)?
            .checked_mul(4)
    }
}

/// Splits the preamble and parses the JSON header; returns it with the payload slice.
pub fn parse_header(bytes: &[u8]) -> Result<(Header, &[u8])> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::Format("missing EABF magic".into()));
    }
    if bytes.len() < PREAMBLE {
        return Err(Error::Truncation("file shorter than the fixed preamble".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Format(format!("unsupported EABF version {version}")));
    }
    let header_len = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let header_end = usize::try_from(header_len)
        .ok()
        .and_then(|h| h.checked_add(PREAMBLE))
        .filter(|&end| end <= bytes.len())
        .ok_or_else(|| {
            Error::Truncation(format!("header length {header_len} exceeds file size"))
        })?;
    let header: Header = serde_json::from_slice(&bytes[PREAMBLE..header_end])
        .map_err(|e| Error::Format(format!("bad JSON header: {e}")))?;
    Ok((header, &bytes[header_end..]))
}

pub fn decode(bytes: &[u8]) -> Result<Dataset> {
    let (h, payload) = parse_header(bytes)?;
    if h.channel_names.len() != h.n_channels {
        return Err(Error::Format(format!(
            "n_channels = {} but {} channel names",
            h.n_channels,
            h.channel_names.len()
        )));
    }
    for (what, n) in [
        ("labels", h.labels.len()),
        ("subjects", h.subjects.len()),
        ("sessions", h.sessions.len()),
    ] {
        if n != h.n_windows {
            return Err(Error::Format(format!(
                "n_windows = {} but {n} {what}",
                h.n_windows
            )));
        }
    }
    let expected = h
        .payload_len()
        .ok_or_else(|| Error::Format("header dimensions overflow".into()))?;
    if payload.len() != expected {
        return Err(Error::Truncation(format!(
            "payload is {} bytes, header implies {expected}",
            payload.len()
        )));
    }
    let montage = match &h.channel_positions {
        Some(p) => Montage::with_positions(&h.channel_names, p)?,
        None => Montage::from_names(&h.channel_names),
    };
    let per_window = h.n_channels * h.n_samples;
    let mut windows = Vec::with_capacity(h.n_windows);
    for (i, chunk) in payload.chunks_exact(per_window * 4).enumerate() {
        let samples: Vec<f64> = chunk
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().unwrap()) as f64)
            .collect();
        if let Some(pos) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite sample in window {i} at offset {pos}"
            )));
        }
        let data = Array2::from_shape_vec((h.n_channels, h.n_samples), samples)
            .map_err(|e| Error::Size(e.to_string()))?;
        windows.push(EegWindow::new(data, h.sfreq_hz, h.labels[i])?);
    }
    Dataset::new(
        montage,
        h.n_samples,
        h.sfreq_hz,
        windows,
        h.subjects,
        h.sessions,
    )
}

pub fn encode(d: &Dataset) -> Result<Vec<u8>> {
    for (i, w) in d.windows().iter().enumerate() {
        if let Some(v) = w.data().iter().find(|v| !(**v as f32).is_finite()) {
            return Err(Error::Data(format!(
                "window {i} holds {v}, not representable as a finite f32"
            )));
        }
    }
    let header = serde_json::to_vec(&Header::of(d)).expect("header serializes");
    let mut out = Vec::with_capacity(PREAMBLE + header.len() + d.len() * d.n_channels() * d.n_samples() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(&header);
    for w in d.windows() {
        // Standard layout, so iteration is channel-major then time.
        for &v in w.data().iter() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

/// Validates everything before touching the filesystem.
pub fn write_dataset(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode(d)?;
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw_file(header: &str, payload: &[f32]) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"EABF");
        out.extend_from_slice(&1u32.to_le_bytes());
        out.extend_from_slice(&(header.len() as u64).to_le_bytes());
        out.extend_from_slice(header.as_bytes());
        for v in payload {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    const ONE_WINDOW: &str = r#"{"n_windows":1,"n_channels":2,"n_samples":4,"sfreq_hz":100.0,"channel_names":["C3","C4"],"labels":[0],"subjects":[0],"sessions":[0]}"#;

    #[test]
    fn payload_layout_is_channel_major() {
        let bytes = raw_file(ONE_WINDOW, &[1., 2., 3., 4., 5., 6., 7., 8.]);
        let d = decode(&bytes).unwrap();
        let w = &d.windows()[0];
        assert_eq!(w.row(0), vec![1., 2., 3., 4.]);
        assert_eq!(w.row(1), vec![5., 6., 7., 8.]);
        assert_eq!(encode(&d).unwrap(), bytes);
    }

    #[test]
    fn empty_dataset_keeps_montage() {
        let h = r#"{"n_windows":0,"n_channels":2,"n_samples":4,"sfreq_hz":100.0,"channel_names":["C3","C4"],"channel_positions":[[-1.0,0.0,0.0],[1.0,0.0,0.0]],"labels":[],"subjects":[],"sessions":[]}"#;
        let bytes = raw_file(h, &[]);
        let d = decode(&bytes).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.montage().names(), &["C3", "C4"]);
        assert!(d.montage().positions().is_some());
        let out = encode(&d).unwrap();
        assert_eq!(out.len(), PREAMBLE + h.len());
    }

    #[test]
    fn bad_magic() {
        let mut bytes = raw_file(ONE_WINDOW, &[0.0; 8]);
        bytes[0] = b'X';
        assert!(matches!(decode(&bytes), Err(Error::Format(_))));
    }

    #[test]
    fn payload_too_small_for_header() {
        let h = ONE_WINDOW
            .replace("\"n_channels\":2", "\"n_channels\":3")
            .replace("[\"C3\",\"C4\"]", "[\"C3\",\"C4\",\"Cz\"]");
        let bytes = raw_file(&h, &[0.0; 8]);
        assert!(matches!(decode(&bytes), Err(Error::Truncation(_))));
    }

    #[test]
    fn header_length_past_eof() {
        let mut bytes = raw_file(ONE_WINDOW, &[0.0; 8]);
        bytes[8..16].copy_from_slice(&(1u64 << 40).to_le_bytes());
        assert!(matches!(decode(&bytes), Err(Error::Truncation(_))));
    }

    #[test]
    fn nan_in_payload() {
        let bytes = raw_file(ONE_WINDOW, &[1., 2., f32::NAN, 4., 5., 6., 7., 8.]);
        assert!(matches!(decode(&bytes), Err(Error::Data(_))));
    }

    #[test]
    fn overflowing_f32_is_rejected_before_writing() {
        let m = Montage::from_names(&["Cz"]);
        let w = EegWindow::from_rows(&[vec![1e300, 0.0]], 10.0, 0).unwrap();
        let d = Dataset::new(m, 2, 10.0, vec![w], vec![0], vec![0]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.eabf");
        assert!(matches!(write_dataset(&d, &path), Err(Error::Data(_))));
        assert!(!path.exists());
    }
}
