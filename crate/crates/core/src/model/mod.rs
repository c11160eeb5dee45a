//! Concrete models, output geometry and labelling.

mod geometry;
mod labelling;
mod linear;

pub use geometry::{OutputMetric, Rect};
pub use labelling::{LabellingFile, LabellingMap, RegionFile, DISJOINT_TOL};
pub use linear::{LinearGaussianModel, ModelFile};
