//! Ribbon graphs, wheels, and the labeled skeleta of the mirror curves.

pub mod graph;
pub mod skeleton;
pub mod wheel;

pub use graph::{subgraph_predicates, RibbonGraph, Subgraph, SubgraphPredicates};
pub use skeleton::{
    affine_skeleton, affine_skeleton_at, default_placement, glue_skeletons, theta_skeleton, GlobalSkeleton,
    GluingSite, LabeledSkeleton, SkeletonCircle, ThetaSkeleton,
};
pub use wheel::{make_wheel, Spoke, Wheel};
