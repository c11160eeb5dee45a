use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Rect;

/// Uniform tiling of a box; cell indices are row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPartition {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
}

impl GridPartition {
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn num_cells(&self) -> usize {
        self.counts.iter().product()
    }

    /// Per-axis cell widths `δ⃗`.
    pub fn widths(&self) -> Vec<f64> {
        (0..self.dim()).map(|d| (self.hi[d] - self.lo[d]) / self.counts[d] as f64).collect()
    }

    pub fn bounding_box(&self) -> Rect {
        Rect { lo: self.lo.clone(), hi: self.hi.clone() }
    }

    /// Multi-index of a cell.
    pub fn multi_index(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for d in (0..self.dim()).rev() {
            idx[d] = i % self.counts[d];
            i /= self.counts[d];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.counts).fold(0, |acc, (&k, &c)| acc * c + k)
    }

    /// Axis coordinate of the `k`-th cell center along axis `d`.
    pub fn axis_center(&self, d: usize, k: usize) -> f64 {
        let w = (self.hi[d] - self.lo[d]) / self.counts[d] as f64;
        self.lo[d] + (k as f64 + 0.5) * w
    }

    /// Closed interval of the `k`-th cell along axis `d`.
    pub fn axis_interval(&self, d: usize, k: usize) -> (f64, f64) {
        let w = (self.hi[d] - self.lo[d]) / self.counts[d] as f64;
        let lo = self.lo[d] + k as f64 * w;
        let hi = if k + 1 == self.counts[d] { self.hi[d] } else { self.lo[d] + (k + 1) as f64 * w };
        (lo, hi)
    }

    /// Representative point (cell center).
    pub fn center(&self, i: usize) -> Vec<f64> {
        self.multi_index(i).iter().enumerate().map(|(d, &k)| self.axis_center(d, k)).collect()
    }

    pub fn cell(&self, i: usize) -> Rect {
        let (lo, hi) = self.multi_index(i).iter().enumerate().map(|(d, &k)| self.axis_interval(d, k)).unzip();
        Rect { lo, hi }
    }

    /// Cell containing `x`; upper faces belong to the next cell except on the
    /// box boundary. `None` outside the box.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        let mut idx = Vec::with_capacity(self.dim());
        for d in 0..self.dim() {
            let v = x[d];
            if !(self.lo[d] <= v && v <= self.hi[d]) {
                return None;
            }
            let w = (self.hi[d] - self.lo[d]) / self.counts[d] as f64;
            let k = if w > 0.0 { ((v - self.lo[d]) / w).floor() as usize } else { 0 };
            idx.push(k.min(self.counts[d] - 1));
        }
        Some(self.flat_index(&idx))
    }

    /// The snapping operator Π; `None` outside the box.
    pub fn snap(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.locate(x).map(|i| self.center(i))
    }
}

/// Uniform tiling of `bbox` with `counts[d]` cells along axis `d`.
pub fn build_grid(bbox: &Rect, counts: &[usize]) -> Result<GridPartition> {
    if counts.len() != bbox.dim() || counts.is_empty() {
        return Err(Error::dim("grid counts must match the box dimension"));
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::arg("grid counts must be at least 1"));
    }
    if bbox.lo.iter().zip(&bbox.hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
        return Err(Error::arg("grid box is empty or unbounded"));
    }
    Ok(GridPartition { lo: bbox.lo.clone(), hi: bbox.hi.clone(), counts: counts.to_vec() })
}
