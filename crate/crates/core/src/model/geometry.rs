use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed axis-aligned rectangle `[lo, hi]` in ℝᵈ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Rect {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Rect> {
        if lo.len() != hi.len() {
            return Err(Error::dim(format!("rectangle bounds have lengths {} and {}", lo.len(), hi.len())));
        }
        if lo.iter().chain(&hi).any(|v| v.is_nan()) {
            return Err(Error::arg("rectangle bound is NaN"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::arg("rectangle has lo > hi"));
        }
        Ok(Rect { lo, hi })
    }

    /// Build from `[[lo, hi], ...]` pairs.
    pub fn from_bounds(bounds: &[[f64; 2]]) -> Result<Rect> {
        Rect::new(bounds.iter().map(|b| b[0]).collect(), bounds.iter().map(|b| b[1]).collect())
    }

    pub fn bounds(&self) -> Vec<[f64; 2]> {
        self.lo.iter().zip(&self.hi).map(|(&l, &h)| [l, h]).collect()
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        y.len() == self.dim() && y.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&l, &h))| l <= v && v <= h)
    }

    /// Euclidean distance from `y` to the rectangle (zero inside).
    pub fn distance(&self, y: &[f64]) -> f64 {
        y.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&l, &h))| {
                let d = (l - v).max(v - h).max(0.0);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// True iff the closed box `y ± r` lies inside the rectangle.
    pub fn contains_box(&self, y: &[f64], r: f64) -> bool {
        y.len() == self.dim() && y.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&l, &h))| l <= v - r && v + r <= h)
    }

    /// Shrink every face by `r`; `None` when nothing remains.
    pub fn eroded(&self, r: f64) -> Option<Rect> {
        let lo: Vec<f64> = self.lo.iter().map(|l| l + r).collect();
        let hi: Vec<f64> = self.hi.iter().map(|h| h - r).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            None
        } else {
            Some(Rect { lo, hi })
        }
    }

    /// Bounding box of the dilation by `r`.
    pub fn dilated(&self, r: f64) -> Rect {
        Rect { lo: self.lo.iter().map(|l| l - r).collect(), hi: self.hi.iter().map(|h| h + r).collect() }
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).collect()
    }

    /// True iff the interiors overlap by more than `tol` along every axis.
    pub fn interiors_overlap(&self, other: &Rect, tol: f64) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|d| self.hi[d].min(other.hi[d]) - self.lo[d].max(other.lo[d]) > tol)
    }
}

/// The output metric: Euclidean distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OutputMetric;

impl OutputMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}
