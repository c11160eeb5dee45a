//! Robust dynamic programming for reachability and DFA specifications.

mod backup;
mod driver;
mod policy;
mod product;
mod reach;
mod targets;

pub use backup::truncate;
pub use driver::MAX_PRODUCT_ENTRIES;
pub use policy::{BoundKind, Horizon, RobustPolicy, ValueTable, FIXPOINT_TOL, MAX_ITERATIONS};
pub use product::{evaluate_product, product_reach, relaxed_letter_sets, robust_scltl, LetterSets};
pub use reach::{evaluate_reach, reach, robust_reach, standard_reach, upper_bound_reach};
pub use targets::{dilate_target, erode_target, TargetSet};
