//! Rational maps, branch-tracked pull-backs of Jordan curves, invariant-disk
//! geometry, basin-of-infinity coordinates, and the component census.

pub mod basin;
pub mod census;
pub mod curve;
pub mod map;
pub mod poly;
pub mod probe;
pub mod siegel;
pub mod tree;

pub use basin::{dist_to_polyline, equipotential_family, ray_segment, EquipotentialFamily, RaySegment};
pub use census::{fatou_census, CensusOptions, CensusReport};
pub use curve::{pullback_curve, track_path, JordanCurve, PullbackComponents};
pub use map::{QuadSiegel, RationalMap, PREIMAGE_RESIDUAL};
pub use probe::{contraction_probe, far_field_ratios, ProbeRegion, ProbeReport};
pub use siegel::{
    boundary_invariance_residual, boundary_sample_gap, inscribed_curve, postcritical_sample,
    seed_disk_touching, siegel_boundary,
};
pub use tree::{pullback_tree, ArcTouch, PullbackNode, PullbackTree, TreePolicy};
