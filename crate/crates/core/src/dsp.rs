//! Zero-phase low-pass smoothing of cohesion signals, discrete correlation
//! of parallel signals, and correlation matrices over labeled analysis runs.
//!
//! Smoothing uses a symmetric FIR kernel with reflected edges, so boundary
//! positions are not shifted: the correlation step assumes the compared
//! signals have no phase offset. Correlation is the plain discrete sum
//! `h[j] = sum_k x[j + k] * y[k]` with out-of-range terms contributing zero;
//! for aligned parallel signals only `h[0]` carries meaning, and dividing it
//! by the product of the input norms gives the similarity score `r`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vectors::CohesionSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    MovingAverage,
    Hamming,
}

/// Edge handling for the smoothing window. Reflection avoids inventing
/// boundary minima at the document ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMode {
    Reflect,
}

/// A symmetric FIR low-pass filter: kernel coefficients are non-negative and
/// sum to one, so constant signals pass through unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub kind: FilterKind,
    /// Window width in gaps; must be odd so the kernel is centered.
    pub window: usize,
    pub edge: EdgeMode,
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            kind: FilterKind::MovingAverage,
            window: 5,
            edge: EdgeMode::Reflect,
        }
    }
}

impl FilterSpec {
    pub fn moving_average(window: usize) -> FilterSpec {
        FilterSpec {
            kind: FilterKind::MovingAverage,
            window,
            edge: EdgeMode::Reflect,
        }
    }

    pub fn hamming(window: usize) -> FilterSpec {
        FilterSpec {
            kind: FilterKind::Hamming,
            window,
            edge: EdgeMode::Reflect,
        }
    }

    /// Kernel coefficients, normalized to sum to one.
    pub fn kernel(&self) -> Result<Vec<f64>> {
        if self.window == 0 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "filter window must be odd and at least 1, got {}",
                self.window
            )));
        }
        let w = self.window;
        let mut kernel = match self.kind {
            FilterKind::MovingAverage => vec![1.0; w],
            FilterKind::Hamming => {
                if w == 1 {
                    vec![1.0]
                } else {
                    (0..w)
                        .map(|k| {
                            let phase = 2.0 * std::f64::consts::PI * k as f64 / (w - 1) as f64;
                            0.54 - 0.46 * phase.cos()
                        })
                        .collect()
                }
            }
        };
        let sum: f64 = kernel.iter().sum();
        for c in &mut kernel {
            *c /= sum;
        }
        Ok(kernel)
    }
}

/// Smooths a signal with a zero-phase FIR kernel, reflecting the signal at
/// both edges (`padded[-1] = values[1]`, and so on). The output keeps the
/// input's length, so gap indices still line up with segment gaps.
pub fn lowpass(signal: &CohesionSignal, spec: &FilterSpec) -> Result<CohesionSignal> {
    let kernel = spec.kernel()?;
    let len = signal.values.len();
    let max = if len == 0 { 0 } else { 2 * len - 1 };
    if spec.window > max {
        return Err(Error::FilterWindow {
            window: spec.window,
            len,
            max,
        });
    }

    let half = spec.window / 2;
    let values: Vec<f64> = (0..len)
        .map(|i| {
            kernel
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    let j = i as isize + k as isize - half as isize;
                    let j = if j < 0 {
                        (-j) as usize
                    } else if j as usize >= len {
                        2 * (len - 1) - j as usize
                    } else {
                        j as usize
                    };
                    c * signal.values[j]
                })
                .sum()
        })
        .collect();

    Ok(CohesionSignal {
        doc_id: signal.doc_id.clone(),
        values,
        degenerate: signal.degenerate.clone(),
        smoothed: true,
        filter: Some(*spec),
    })
}

/// Discrete correlation of two signals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    /// `h[j] = sum_k x[j + k] * y[k]`, out-of-range terms zero;
    /// `len = n_x + n_y - 1`.
    pub h: Vec<f64>,
    /// `h[0]` normalized by the product of the input norms. The first
    /// coefficient is the one that matters for phase-aligned signals.
    pub r: f64,
    pub n_x: usize,
    pub n_y: usize,
}

/// Correlates two signals by direct summation and normalizes the first
/// coefficient by the product of the input norms.
pub fn cross_correlate(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    let norm_product = (sum_sq(x) * sum_sq(y)).sqrt();
    if norm_product == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let (n_x, n_y) = (x.len(), y.len());
    let n_h = n_x + n_y - 1;
    let mut h = vec![0.0; n_h];
    for (j, out) in h.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, &yk) in y.iter().enumerate() {
            if j + k < n_x {
                acc += x[j + k] * yk;
            }
        }
        *out = acc;
    }
    let r = h[0] / norm_product;
    Ok(CorrelationResult { h, r, n_x, n_y })
}

fn sum_sq(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum()
}

/// Symmetric matrix of normalized correlations over labeled runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    /// CSV with a label header row and column, three decimal places.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for label in &self.labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            for cell in &self.cells[i] {
                let _ = write!(out, ",{cell:.3}");
            }
            out.push('\n');
        }
        out
    }

    /// Full-precision JSON variant.
    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("matrix serializes");
        json.push('\n');
        json
    }
}

/// Computes the pairwise correlation matrix of equally long, labeled
/// signals. Parallel runs must already be aligned at the segment level;
/// without that, correlating them would be meaningless.
pub fn correlation_matrix(runs: &[(String, Vec<f64>)]) -> Result<CorrelationMatrix> {
    if runs.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "a correlation matrix needs at least 2 runs, got {}",
            runs.len()
        )));
    }
    let (first_label, first) = &runs[0];
    for (label, values) in &runs[1..] {
        if values.len() != first.len() {
            return Err(Error::SignalLength {
                a_label: first_label.clone(),
                a_len: first.len(),
                b_label: label.clone(),
                b_len: values.len(),
            });
        }
    }

    let n = runs.len();
    let mut cells = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let r = cross_correlate(&runs[i].1, &runs[j].1)?.r;
            cells[i][j] = r;
            cells[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: runs.iter().map(|(label, _)| label.clone()).collect(),
        cells,
    })
}

/// Two-column plot data (`gap_index value`), one line per gap.
pub fn plot_dat(values: &[f64]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i} {v:.6}");
    }
    out
}

/// CSV pairing a raw signal with its smoothed counterpart:
/// `gap_index,raw,smoothed`.
pub fn smoothed_csv(raw: &[f64], smoothed: &[f64]) -> String {
    assert_eq!(
        raw.len(),
        smoothed.len(),
        "signals must cover the same gaps"
    );
    let mut out = String::from("gap_index,raw,smoothed\n");
    for (i, (r, s)) in raw.iter().zip(smoothed).enumerate() {
        let _ = writeln!(out, "{i},{r:.6},{s:.6}");
    }
    out
}
