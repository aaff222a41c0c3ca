//! Finite reconstruction of the tree realising a summed based length
//! function on an orbit sample, and the checks that it refines both factors.

mod metric;
mod tree;
mod verify;

pub use metric::{orbit_metric, MetricViolation, OrbitMetric};
pub use tree::{
    build_tree, build_tree_in_order, split_map, FiniteTree, TreeDocument, TreeEdge, TreeEdgeRecord,
    TreeNode, TreeNodeRecord,
};
pub use verify::{
    displacement_check, verify_refinement, DisplacementReport, DisplacementRow, RefinementReport,
    RefinementViolation,
};
