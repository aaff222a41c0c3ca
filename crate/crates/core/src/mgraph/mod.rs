//! Free actions on simplicial trees presented by marked metric graphs.

mod axis;
mod cover;
mod graph;
mod horizon;
mod marked;

pub use axis::{AxisDescriptor, AxisRelation};
pub use cover::{Geodesic, TreePoint};
pub use graph::{cyclic_split, reverse_path, tighten, Edge, EdgeRecord, MetricGraph, OEdge};
pub use horizon::EdgeLift;
pub use marked::{presets, MarkedGraph, MarkedGraphFile};
