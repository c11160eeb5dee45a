use serde::{Deserialize, Serialize};

use crate::abstraction::FiniteAbstraction;
use crate::error::{Error, Result};
use crate::model::Rect;

/// Abstract states whose output image lies in a (modified) target set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSet {
    /// Membership per abstract state, sink last.
    pub states: Vec<bool>,
    /// The eroded or dilated output rectangles.
    pub regions: Vec<Rect>,
}

impl TargetSet {
    pub fn is_empty(&self) -> bool {
        !self.states.iter().any(|&b| b)
    }
}

fn check(abs: &FiniteAbstraction, k: &[Rect], eps: f64) -> Result<()> {
    if !(eps >= 0.0) {
        return Err(Error::arg("ε must be nonnegative"));
    }
    if k.iter().any(|r| r.dim() != abs.c1.nrows()) {
        return Err(Error::dim("target rectangle dimension differs from the output dimension"));
    }
    Ok(())
}

/// Cells whose whole output image lies in `K^ε` (every face moved in by ε).
/// The sink is never a target.
pub fn erode_target(abs: &FiniteAbstraction, k: &[Rect], eps: f64) -> Result<TargetSet> {
    check(abs, k, eps)?;
    let margin = abs.output_margin() * (1.0 - 1e-12);
    let regions: Vec<Rect> = k.iter().filter_map(|r| r.eroded(eps)).collect();
    let mut states: Vec<bool> = (0..abs.num_cells())
        .map(|i| {
            let y = abs.output_of(i);
            regions.iter().any(|r| r.contains_box(&y, margin))
        })
        .collect();
    states.push(false);
    Ok(TargetSet { states, regions })
}

/// Cells whose output image meets `K^{−ε}` (points within ε of `K`).
/// The sink counts as a target so that upper bounds stay sound.
pub fn dilate_target(abs: &FiniteAbstraction, k: &[Rect], eps: f64) -> Result<TargetSet> {
    check(abs, k, eps)?;
    let margin = abs.output_margin();
    let mut states: Vec<bool> = (0..abs.num_cells())
        .map(|i| {
            let y = abs.output_of(i);
            k.iter().any(|r| r.distance(&y) <= eps + margin)
        })
        .collect();
    states.push(true);
    Ok(TargetSet { states, regions: k.iter().map(|r| r.dilated(eps)).collect() })
}
