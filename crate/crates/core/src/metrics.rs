//! Utility metrics for sanitized data: 2-D histograms, mean shift and
//! smoothed KL divergence between empirical distributions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    DegenerateBox,
    NoBins,
    LengthMismatch { before: usize, after: usize },
    Empty,
    BinningMismatch,
    InvalidSmoothing(f64),
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::DegenerateBox => f.write_str("histogram box has a side of zero length"),
            MetricsError::NoBins => f.write_str("at least one bin per axis is required"),
            MetricsError::LengthMismatch { before, after } => {
                write!(f, "columns differ in length: {before} vs {after}")
            }
            MetricsError::Empty => f.write_str("columns are empty"),
            MetricsError::BinningMismatch => f.write_str("histograms use different binnings"),
            MetricsError::InvalidSmoothing(a) => write!(f, "smoothing must be positive, got {a}"),
        }
    }
}

impl core::error::Error for MetricsError {}

/// Which way round to measure divergence between the original and the
/// sanitized histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlDirection {
    /// `D(original ‖ sanitized)`
    #[default]
    OriginalToSanitized,
    /// `D(sanitized ‖ original)`
    SanitizedToOriginal,
}

/// Uniform 2-D histogram over a box. Bins are half-open except the last
/// bin on each axis, which is closed; points outside the box are tallied
/// in `discarded`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    bounds: [[f64; 2]; 2],
    bins: [usize; 2],
    /// Row-major, `counts[xbin * ny + ybin]`.
    counts: Vec<u64>,
    total: u64,
    discarded: u64,
}

fn bin_index(v: f64, [lo, hi]: [f64; 2], n: usize) -> Option<usize> {
    if !(lo <= v && v <= hi) {
        return None;
    }
    if v == hi {
        return Some(n - 1);
    }
    let edge = |k: usize| lo + (hi - lo) * (k as f64) / (n as f64);
    let mut k = (libm::floor((v - lo) / (hi - lo) * n as f64) as usize).min(n - 1);
    // Align with the explicit edges so a point on an edge lands above it.
    while k > 0 && v < edge(k) {
        k -= 1;
    }
    while k + 1 < n && v >= edge(k + 1) {
        k += 1;
    }
    Some(k)
}

impl Histogram2D {
    pub fn new(bounds: [[f64; 2]; 2], bins: [usize; 2]) -> Result<Self, MetricsError> {
        if bins.contains(&0) {
            return Err(MetricsError::NoBins);
        }
        if bounds.iter().any(|[lo, hi]| !lo.is_finite() || !hi.is_finite() || lo >= hi) {
            return Err(MetricsError::DegenerateBox);
        }
        Ok(Histogram2D { bounds, bins, counts: vec![0; bins[0] * bins[1]], total: 0, discarded: 0 })
    }

    pub fn from_points<'a, I>(points: I, bounds: [[f64; 2]; 2], bins: [usize; 2]) -> Result<Self, MetricsError>
    where
        I: IntoIterator<Item = &'a [f64; 2]>,
    {
        let mut h = Self::new(bounds, bins)?;
        for p in points {
            h.add(*p);
        }
        Ok(h)
    }

    pub fn add(&mut self, [x, y]: [f64; 2]) {
        match (bin_index(x, self.bounds[0], self.bins[0]), bin_index(y, self.bounds[1], self.bins[1])) {
            (Some(i), Some(j)) => {
                self.counts[i * self.bins[1] + j] += 1;
                self.total += 1;
            }
            _ => self.discarded += 1,
        }
    }

    pub fn bins(&self) -> [usize; 2] {
        self.bins
    }

    pub fn bounds(&self) -> [[f64; 2]; 2] {
        self.bounds
    }

    pub fn count(&self, xbin: usize, ybin: usize) -> u64 {
        self.counts[xbin * self.bins[1] + ybin]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of binned points.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    /// `(xbin, ybin, count)` for every cell in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let ny = self.bins[1];
        self.counts.iter().enumerate().map(move |(k, &c)| (k / ny, k % ny, c))
    }

    fn same_binning(&self, other: &Self) -> bool {
        self.bins == other.bins && self.bounds == other.bounds
    }
}

/// `mean(after) − mean(before)`, accumulated as the mean of pairwise
/// differences so identical columns give exactly zero.
pub fn mean_diff(before: &[f64], after: &[f64]) -> Result<f64, MetricsError> {
    if before.len() != after.len() {
        return Err(MetricsError::LengthMismatch { before: before.len(), after: after.len() });
    }
    if before.is_empty() {
        return Err(MetricsError::Empty);
    }
    let sum: f64 = before.iter().zip(after).map(|(b, a)| a - b).sum();
    Ok(sum / before.len() as f64)
}

/// `Σ p̂ ln(p̂ / q̂)` with `p̂ = (count + α) / (total + α·bins)`.
///
/// Each term is accumulated as `p̂ ln(p̂/q̂) − p̂ + q̂`, which is nonnegative
/// term by term and sums to the same value since both sides are normalised.
pub fn kl_divergence(p: &Histogram2D, q: &Histogram2D, alpha: f64) -> Result<f64, MetricsError> {
    if !p.same_binning(q) {
        return Err(MetricsError::BinningMismatch);
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(MetricsError::InvalidSmoothing(alpha));
    }
    let cells = p.counts.len() as f64;
    let pz = p.total as f64 + alpha * cells;
    let qz = q.total as f64 + alpha * cells;
    let mut sum = 0.0;
    for (&pc, &qc) in p.counts.iter().zip(&q.counts) {
        if pc == qc && p.total == q.total {
            continue;
        }
        let pi = (pc as f64 + alpha) / pz;
        let qi = (qc as f64 + alpha) / qz;
        sum += (pi * libm::log(pi / qi) - pi + qi).max(0.0);
    }
    Ok(sum)
}

/// One point of the privacy/utility curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityCurvePoint {
    pub rho: f64,
    pub mean_diff: f64,
    pub kl: f64,
    pub rows_modified: usize,
    pub rows_used: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: [[f64; 2]; 2] = [[0.0, 1.0], [0.0, 1.0]];

    #[test]
    fn single_point_single_bin() {
        let h = Histogram2D::from_points(&[[0.5, 0.5]], UNIT, [1, 1]).unwrap();
        assert_eq!(h.counts(), &[1]);
        assert_eq!(h.total(), 1);
    }

    #[test]
    fn edges_follow_half_open_rule() {
        let h = Histogram2D::from_points(&[[0.5, 0.25], [1.0, 1.0], [0.0, 0.0], [1.5, 0.5]], UNIT, [2, 4]).unwrap();
        // x = 0.5 is the edge between bins 0 and 1; it belongs to bin 1.
        assert_eq!(h.count(1, 1), 1);
        assert_eq!(h.count(0, 1), 0);
        // Upper box edge falls in the last (closed) bin.
        assert_eq!(h.count(1, 3), 1);
        assert_eq!(h.count(0, 0), 1);
        assert_eq!(h.total(), 3);
        assert_eq!(h.discarded(), 1);
    }

    #[test]
    fn edges_on_a_bmi_grid() {
        let b = [[0.0, 200.0], [0.0, 250.0]];
        for k in 1..50 {
            let x = 4.0 * k as f64;
            let h = Histogram2D::from_points(&[[x, 1.0]], b, [50, 50]).unwrap();
            assert_eq!(h.count(k, 0), 1, "x = {x}");
        }
    }

    #[test]
    fn bad_histograms() {
        assert_eq!(Histogram2D::new(UNIT, [0, 3]), Err(MetricsError::NoBins));
        assert_eq!(Histogram2D::new([[0.0, 0.0], [0.0, 1.0]], [1, 1]), Err(MetricsError::DegenerateBox));
    }

    #[test]
    fn mean_diff_cases() {
        let a = [1.0, 2.5, 7.0];
        assert_eq!(mean_diff(&a, &a).unwrap(), 0.0);
        let shifted: Vec<f64> = a.iter().map(|v| v + 3.0).collect();
        assert!((mean_diff(&a, &shifted).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(mean_diff(&[], &[]), Err(MetricsError::Empty));
        assert!(matches!(mean_diff(&[1.0], &[]), Err(MetricsError::LengthMismatch { .. })));
    }

    #[test]
    fn kl_basics() {
        let p = Histogram2D::from_points(&[[0.1, 0.1], [0.9, 0.9], [0.9, 0.1]], UNIT, [2, 2]).unwrap();
        let q = Histogram2D::from_points(&[[0.1, 0.1], [0.1, 0.1], [0.2, 0.9]], UNIT, [2, 2]).unwrap();
        assert_eq!(kl_divergence(&p, &p, 1e-9).unwrap(), 0.0);
        assert!(kl_divergence(&p, &q, 1e-9).unwrap() > 0.0);
        assert!(kl_divergence(&q, &p, 0.5).unwrap() > 0.0);
        let other = Histogram2D::new(UNIT, [3, 2]).unwrap();
        assert_eq!(kl_divergence(&p, &other, 1.0), Err(MetricsError::BinningMismatch));
        assert_eq!(kl_divergence(&p, &q, 0.0), Err(MetricsError::InvalidSmoothing(0.0)));
    }
}
