//! Critical circle maps, dynamical length and first-return statistics.

pub mod arc;
pub mod map;
pub mod measure;
pub mod returns;

pub use arc::{ccw_dist, norm_angle, CircleArc};
pub use map::{tune_to_rotation, tune_to_rotation_value, CircleMap, CriticalPoint};
pub use measure::{InvariantMeasure, Side};
pub use returns::{first_return, return_stats, return_triple, ReturnStats, ReturnTriple};
