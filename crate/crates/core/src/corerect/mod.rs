//! Rectangles in the product of two marked-graph trees: search, the axis
//! constructions, and conversion to and from length-function pair witnesses.
//!
//! Horizons are tested on whole edges. In a simplicial tree the direction
//! towards any end is constant along an open edge, so every closed subarc of
//! an edge has the same horizon; [`subarc_spot_check`] samples this.

mod light;
mod rect;
mod witness;

pub use light::{subarc_spot_check, twice_light_scan, TwiceLight};
pub use rect::{
    ball_lifts, certificate_from_rectangle, orbit_representatives, rectangle_from_pair,
    rectangle_search, RectangleCertificate, RectanglePairs, RectangleSearch, SearchBudget, CORNERS,
};
pub use witness::{
    arc_axis_witness, axis_product, beyond, bounded_representative, crosses, pos_axis_witness,
    unbounded_overlap, MAX_INCREMENTS,
};
