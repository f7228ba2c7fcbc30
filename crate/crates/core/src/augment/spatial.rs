use ndarray::Array2;

use crate::dsp::{interpolation_matrix, rotation, Axis, SplineConfig};
use crate::error::{Error, Result};
use crate::montage::Montage;
use crate::rng::RngStream;
use crate::window::EegWindow;

/// Largest admissible rotation range, in degrees.
pub const MAX_ROTATION_DEG: f64 = 30.0;

fn check_montage(w: &EegWindow, m: &Montage) -> Result<()> {
    if m.len() != w.n_channels() {
        return Err(Error::Input(format!(
            "montage has {} channels, window has {}",
            m.len(),
            w.n_channels()
        )));
    }
    Ok(())
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Param(format!("{what} must be in [0, 1], got {p}")));
    }
    Ok(())
}

fn permute_rows(w: &EegWindow, source_of: &[usize]) -> EegWindow {
    let src = w.data();
    let out = Array2::from_shape_fn(src.dim(), |(c, t)| src[(source_of[c], t)]);
    w.with_data(out)
}

/// Swaps left- and right-hemisphere rows; midline rows stay put.
pub fn channels_symmetry(w: &EegWindow, m: &Montage) -> Result<EegWindow> {
    check_montage(w, m)?;
    let perm = m.pairing()?.permutation(w.n_channels());
    Ok(permute_rows(w, &perm))
}

/// Zeroes each channel independently with probability `p_drop`.
pub fn channels_dropout(w: &EegWindow, p_drop: f64, rng: &mut RngStream) -> Result<EegWindow> {
    check_probability(p_drop, "p_drop")?;
    let mut data = w.data().clone();
    for mut row in data.rows_mut() {
        if rng.bernoulli(p_drop) {
            row.fill(0.0);
        }
    }
    Ok(w.with_data(data))
}

/// Picks each channel into a subset with probability `p_shuffle`, then
/// permutes the rows of that subset uniformly at random.
pub fn channels_shuffle(w: &EegWindow, p_shuffle: f64, rng: &mut RngStream) -> Result<EegWindow> {
    check_probability(p_shuffle, "p_shuffle")?;
    let c = w.n_channels();
    let subset: Vec<usize> = (0..c).filter(|_| rng.bernoulli(p_shuffle)).collect();
    let mut shuffled = subset.clone();
    rng.shuffle(&mut shuffled);
    let mut source_of: Vec<usize> = (0..c).collect();
    for (&dst, &src) in subset.iter().zip(&shuffled) {
        source_of[dst] = src;
    }
    Ok(permute_rows(w, &source_of))
}

/// Re-estimates the potentials at electrode positions rotated by
/// `theta ~ U[-max_degrees, max_degrees]` about `axis`.
pub fn sensors_rotation(
    w: &EegWindow,
    m: &Montage,
    axis: Axis,
    max_degrees: f64,
    rng: &mut RngStream,
) -> Result<EegWindow> {
    if !(0.0..=MAX_ROTATION_DEG).contains(&max_degrees) {
        return Err(Error::Param(format!(
            "rotation range {max_degrees} deg must be within [0, {MAX_ROTATION_DEG}]"
        )));
    }
    let theta = rng.uniform_range(-max_degrees, max_degrees);
    rotate_sensors_by(w, m, axis, theta, SplineConfig::default())
}

/// Applies the spline interpolation operator for one fixed rotation to all samples.
pub fn rotate_sensors_by(
    w: &EegWindow,
    m: &Montage,
    axis: Axis,
    degrees: f64,
    spline: SplineConfig,
) -> Result<EegWindow> {
    check_montage(w, m)?;
    let positions = m
        .positions()
        .ok_or_else(|| Error::MissingPositions(m.names().join(", ")))?;
    let rot = rotation(axis, degrees);
    let targets: Vec<[f64; 3]> = positions.iter().map(|&p| rot.apply(p)).collect();
    let op = interpolation_matrix(positions, &targets, spline)?;
    Ok(w.with_data(op.dot(w.data())))
}
