//! Spherical-spline interpolation of scalp potentials.
//!
//! Kernel: `g(x) = 1/(4 pi) * sum_{n=1..N} (2n+1) / (n(n+1))^m * P_n(x)`, with
//! `x` the cosine of the angle between two electrodes. Fitting solves the
//! bordered system
//!
//! ```text
//! [ G + lambda I   1 ] [ c  ]   [ v ]
//! [ 1^T            0 ] [ c0 ] = [ 0 ]
//! ```
//!
//! and evaluation at a target `q` returns `c0 + sum_i c_i g(q . p_i)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;

use super::legendre::legendre_series;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineConfig {
    /// Stiffness order `m`.
    pub stiffness: u32,
    /// Series truncation `N`.
    pub n_terms: usize,
    /// Diagonal regularization `lambda`.
    pub lambda: f64,
}

impl Default for SplineConfig {
    fn default() -> Self {
        Self {
            stiffness: 4,
            n_terms: 50,
            lambda: 1e-5,
        }
    }
}

impl SplineConfig {
    fn weights(&self) -> Vec<f64> {
        (1..=self.n_terms)
            .map(|n| {
                let n = n as f64;
                (2.0 * n + 1.0) / (n * (n + 1.0)).powi(self.stiffness as i32) / (4.0 * PI)
            })
            .collect()
    }

    /// Kernel value at angle cosine `x` (clamped to [-1, 1]).
    pub fn kernel(&self, x: f64) -> f64 {
        kernel_with(&self.weights(), x)
    }
}

fn kernel_with(weights: &[f64], x: f64) -> f64 {
    let p = legendre_series(weights.len(), x.clamp(-1.0, 1.0)).expect("clamped argument");
    weights.iter().zip(&p[1..]).map(|(w, pn)| w * pn).sum()
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(p: &[f64; 3]) -> [f64; 3] {
    let n = dot(p, p).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

fn kernel_matrix(rows: &[[f64; 3]], cols: &[[f64; 3]], weights: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        kernel_with(weights, dot(&rows[i], &cols[j]))
    })
}

fn check_sources(positions: &[[f64; 3]]) -> Result<Vec<[f64; 3]>> {
    if positions.len() < 3 {
        return Err(Error::Size(format!(
            "spline needs at least 3 source positions, got {}",
            positions.len()
        )));
    }
    let unit: Vec<[f64; 3]> = positions.iter().map(unit).collect();
    if unit.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Singularity("degenerate source position".into()));
    }
    for i in 0..unit.len() {
        for j in 0..i {
            let d: f64 = (0..3).map(|k| (unit[i][k] - unit[j][k]).powi(2)).sum();
            if d.sqrt() < 1e-9 {
                return Err(Error::Singularity(format!(
                    "source positions {j} and {i} coincide"
                )));
            }
        }
    }
    Ok(unit)
}

/// Bordered system matrix for the given (unit) sources.
fn bordered(sources: &[[f64; 3]], cfg: &SplineConfig, weights: &[f64]) -> DMatrix<f64> {
    let n = sources.len();
    let g = kernel_matrix(sources, sources, weights);
    let mut b = DMatrix::zeros(n + 1, n + 1);
    b.view_mut((0, 0), (n, n)).copy_from(&g);
    for i in 0..n {
        b[(i, i)] += cfg.lambda;
        b[(i, n)] = 1.0;
        b[(n, i)] = 1.0;
    }
    b
}

/// A fitted spline for one set of potentials.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineModel {
    pub positions: Vec<[f64; 3]>,
    pub coefficients: Vec<f64>,
    pub offset: f64,
    pub config: SplineConfig,
}

impl SplineModel {
    pub fn fit(positions: &[[f64; 3]], values: &[f64], config: SplineConfig) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::Input(format!(
                "{} positions but {} values",
                positions.len(),
                values.len()
            )));
        }
        let sources = check_sources(positions)?;
        let n = sources.len();
        let weights = config.weights();
        let b = bordered(&sources, &config, &weights);
        let mut rhs = DVector::zeros(n + 1);
        for (i, v) in values.iter().enumerate() {
            rhs[i] = *v;
        }
        let sol = b
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singularity("bordered spline system is singular".into()))?;
        Ok(Self {
            positions: sources,
            coefficients: sol.iter().take(n).copied().collect(),
            offset: sol[n],
            config,
        })
    }

    pub fn eval(&self, targets: &[[f64; 3]]) -> Vec<f64> {
        let weights = self.config.weights();
        targets
            .iter()
            .map(|q| {
                let q = unit(q);
                self.offset
                    + self
                        .positions
                        .iter()
                        .zip(&self.coefficients)
                        .map(|(p, c)| c * kernel_with(&weights, dot(&q, p)))
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Linear operator `M` (targets x sources) with `M v = eval(fit(sources, v), targets)`.
pub fn interpolation_matrix(
    sources: &[[f64; 3]],
    targets: &[[f64; 3]],
    config: SplineConfig,
) -> Result<Array2<f64>> {
    let sources = check_sources(sources)?;
    let targets: Vec<[f64; 3]> = targets.iter().map(unit).collect();
    let n = sources.len();
    let weights = config.weights();
    let b = bordered(&sources, &config, &weights);
    let mut rhs = DMatrix::zeros(n + 1, n);
    for i in 0..n {
        rhs[(i, i)] = 1.0;
    }
    let solve = b
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singularity("bordered spline system is singular".into()))?;
    let mut g_to = kernel_matrix(&targets, &sources, &weights).insert_column(n, 1.0);
    g_to = &g_to * &solve;
    Ok(Array2::from_shape_fn((targets.len(), n), |(i, j)| g_to[(i, j)]))
}
