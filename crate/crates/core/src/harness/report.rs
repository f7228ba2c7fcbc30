use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "protocol,augmentation,magnitude,fraction,fold,metric,value";

/// z-score of the two-sided 95% normal interval.
const Z95: f64 = 1.96;

/// One metric value for one configuration and fold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub protocol: String,
    pub augmentation: String,
    /// Transform magnitude; absent for multi-transform policies.
    pub magnitude: Option<f64>,
    pub fraction: f64,
    pub fold: usize,
    pub metric: String,
    pub value: f64,
}

impl ReportRow {
    fn key(&self) -> (&str, &str, Option<u64>, u64, &str) {
        (
            &self.protocol,
            &self.augmentation,
            self.magnitude.map(f64::to_bits),
            self.fraction.to_bits(),
            &self.metric,
        )
    }
}

/// Summary over the folds of one configuration and metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub protocol: String,
    pub augmentation: String,
    pub magnitude: Option<f64>,
    pub fraction: f64,
    pub metric: String,
    /// Number of folds with a finite value.
    pub n: usize,
    pub mean: f64,
    /// Half-width `1.96 * sd / sqrt(n)` with the sample standard deviation.
    pub ci95: f64,
    pub median: f64,
}

fn summarize(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ci95 = if n > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Z95 * var.sqrt() / (n as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    (mean, ci95, median)
}

/// Per-fold rows of one protocol run with the configuration that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub protocol: String,
    pub config: Value,
    pub rows: Vec<ReportRow>,
    /// Cells that could not be computed, as `fraction=..., fold=...: message`.
    pub errors: Vec<String>,
}

fn fmt_num(out: &mut String, v: f64) {
    let _ = write!(out, "{v}");
}

impl ExperimentReport {
    pub fn new(protocol: &str, config: Value) -> Self {
        Self {
            protocol: protocol.to_string(),
            config,
            rows: Vec::new(),
            errors: Vec::new(),
        }
    }

    /// Rows for `metric`, optionally restricted to one augmentation label.
    pub fn rows_for<'a>(
        &'a self,
        metric: &'a str,
        augmentation: Option<&'a str>,
    ) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows.iter().filter(move |r| {
            r.metric == metric && augmentation.is_none_or(|a| r.augmentation == a)
        })
    }

    /// One aggregate per distinct configuration and metric, in first-seen order.
    /// Non-finite values are left out of the statistics.
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut groups: Vec<(&ReportRow, Vec<f64>)> = Vec::new();
        for row in &self.rows {
            let pos = groups.iter().position(|(first, _)| first.key() == row.key());
            let slot = match pos {
                Some(i) => &mut groups[i].1,
                None => {
                    groups.push((row, Vec::new()));
                    &mut groups.last_mut().expect("just pushed").1
                }
            };
            if row.value.is_finite() {
                slot.push(row.value);
            }
        }
        groups
            .into_iter()
            .map(|(first, values)| {
                let (mean, ci95, median) = summarize(&values);
                Aggregate {
                    protocol: first.protocol.clone(),
                    augmentation: first.augmentation.clone(),
                    magnitude: first.magnitude,
                    fraction: first.fraction,
                    metric: first.metric.clone(),
                    n: values.len(),
                    mean,
                    ci95,
                    median,
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.protocol);
            out.push(',');
            out.push_str(&r.augmentation);
            out.push(',');
            if let Some(m) = r.magnitude {
                fmt_num(&mut out, m);
            }
            out.push(',');
            fmt_num(&mut out, r.fraction);
            let _ = write!(out, ",{},{},", r.fold, r.metric);
            fmt_num(&mut out, r.value);
            out.push('\n');
        }
        out
    }

    /// Configuration, aggregates and errors; non-finite numbers become null.
    pub fn to_json(&self) -> String {
        let doc = serde_json::json!({
            "protocol": self.protocol,
            "config": self.config,
            "aggregates": self.aggregates(),
            "errors": self.errors,
            "n_rows": self.rows.len(),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    /// Writes the CSV to `path` and the JSON next to it with a `.json` extension.
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))?;
        let json = path.with_extension("json");
        std::fs::write(&json, self.to_json()).map_err(|e| Error::io(&json, e))
    }
}
