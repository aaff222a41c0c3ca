use serde::{Deserialize, Serialize};

use super::axis::AxisDescriptor;
use super::cover::TreePoint;
use super::graph::{push_tight, OEdge};
use super::marked::MarkedGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::Word;

/// An oriented edge of the universal cover: `edge` leaves the vertex lift
/// `anchor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeLift {
    pub anchor: Vec<OEdge>,
    pub edge: OEdge,
}

impl EdgeLift {
    /// The same edge with the opposite orientation.
    pub fn reversed(&self) -> EdgeLift {
        let mut anchor = self.anchor.clone();
        push_tight(&mut anchor, self.edge);
        EdgeLift {
            anchor,
            edge: self.edge.inv(),
        }
    }

    pub fn terminus(&self) -> Vec<OEdge> {
        let mut t = self.anchor.clone();
        push_tight(&mut t, self.edge);
        t
    }
}

impl<S: Scalar> MarkedGraph<S> {
    pub fn edge_lift(&self, anchor: &[OEdge], edge: OEdge) -> Result<EdgeLift> {
        let g = self.graph();
        if !g.is_path_from(self.base(), anchor) || anchor.windows(2).any(|w| w[1] == w[0].inv()) {
            return Err(Error::Domain("edge lift anchor must be a tight path from the base".into()));
        }
        if g.origin(edge) != g.end_vertex(self.base(), anchor) {
            return Err(Error::Domain("edge does not leave the anchor vertex".into()));
        }
        Ok(EdgeLift {
            anchor: anchor.to_vec(),
            edge,
        })
    }

    /// Whether the forward end of the axis lies beyond `e`, in the component of
    /// the tree minus the open edge that contains its terminus.
    pub fn horizon_member_axis(&self, e: &EdgeLift, axis: &AxisDescriptor<S>) -> bool {
        // Geodesic from o(e) to u cⁿ; its first edge stabilises once
        // n·|c| exceeds the length of [ᾱ u].
        let mut path: Vec<OEdge> = e.anchor.iter().rev().map(|x| x.inv()).collect();
        for &x in &axis.entry {
            push_tight(&mut path, x);
        }
        let n = path.len() / axis.period.len() + 2;
        for _ in 0..n {
            for &x in &axis.period {
                push_tight(&mut path, x);
            }
        }
        path.first() == Some(&e.edge)
    }

    /// `w ∈ ⟨e⟩`; false for the identity.
    pub fn horizon_member(&self, e: &EdgeLift, w: &Word) -> Result<bool> {
        self.alphabet().check(w)?;
        if w.is_identity() {
            return Ok(false);
        }
        Ok(self.horizon_member_axis(e, &self.axis(w)?))
    }

    /// Whether `e` lies on the axis of `w` with matching orientation, checked
    /// metrically: both endpoints on the axis and `w` moves `o(e)` past `t(e)`.
    pub fn edge_on_axis(&self, e: &EdgeLift, axis: &AxisDescriptor<S>) -> bool {
        let o = TreePoint::vertex(&e.anchor);
        let t = TreePoint::vertex(&e.terminus());
        if !self.on_axis(&o, axis) || !self.on_axis(&t, axis) {
            return false;
        }
        let moved = self.translate(&axis.word, &o);
        let len = self.graph().length(e.edge).clone();
        self.distance(&t, &moved) != axis.translation_length.clone() + len
    }

    /// Side test through an interior point `p` of `e`: the far axis point
    /// `u cⁿ` is on the terminus side iff the geodesic from `p` to it passes
    /// through `t(e)`.
    pub fn forward_end_beyond_point(
        &self,
        e: &EdgeLift,
        offset: &S,
        axis: &AxisDescriptor<S>,
    ) -> Result<bool> {
        let p = self.point_on_edge(&e.anchor, e.edge, offset.clone())?;
        let t = TreePoint::vertex(&e.terminus());
        let n = (e.anchor.len() + axis.entry.len() + 2) as i64 * axis.period.len() as i64;
        let far = TreePoint::vertex(&axis.vertex_at(n.max(1) + axis.period.len() as i64));
        Ok(self.distance(&p, &far) == self.distance(&p, &t) + self.distance(&t, &far))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgraph::presets::{barbell, rose};
    use crate::words::Alphabet;
    use crate::Rational;

    #[test]
    fn rose_petal_horizons() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let a = r.graph().parse_path("a").unwrap()[0];
        let e = r.edge_lift(&[], a).unwrap();
        let w = |s: &str| al.parse(s).unwrap();
        assert!(r.horizon_member(&e, &w("a")).unwrap());
        assert!(!r.horizon_member(&e, &w("a'")).unwrap());
        assert!(!r.horizon_member(&e, &w("b a b'")).unwrap());
        assert!(r.horizon_member(&e, &w("a b a'")).unwrap());
        assert!(!r.horizon_member(&e, &Word::identity()).unwrap());
        assert!(r.horizon_member(&e.reversed(), &w("a'")).unwrap());
    }

    #[test]
    fn membership_pattern_matches_axis_position() {
        let bb = barbell::<Rational>();
        let al = bb.alphabet().clone();
        let g = bb.graph();
        let mut lifts = Vec::new();
        for anchor in ["", "a", "c", "c b", "~a c"] {
            let path = g.parse_path(anchor).unwrap();
            let v = g.end_vertex(bb.base(), &path);
            for e in g.star(v) {
                if path.last() != Some(&e.inv()) {
                    lifts.push(bb.edge_lift(&path, e).unwrap());
                }
            }
        }
        for s in ["a", "b", "a b", "a b' a", "b a b a'", "c"] {
            let Ok(w) = al.parse(s) else { continue };
            let ax = bb.axis(&w).unwrap();
            let inv = ax.reversed();
            for e in &lifts {
                let ee = e.reversed();
                let fwd = bb.horizon_member_axis(e, &ax);
                let bwd = bb.horizon_member_axis(e, &inv);
                // Axis crossing e positively: forward end beyond e, backward end behind.
                assert_eq!(fwd && bb.horizon_member_axis(&ee, &inv), bb.edge_on_axis(e, &ax));
                // An axis missing e has both ends on one side.
                if !bb.edge_on_axis(e, &ax) && !bb.edge_on_axis(&ee, &ax) {
                    assert_eq!(fwd, bwd, "{s} {e:?}");
                }
                assert_ne!(fwd, bb.horizon_member_axis(&ee, &ax));
            }
        }
    }

    #[test]
    fn interior_side_test_agrees() {
        let bb = barbell::<Rational>();
        let al = bb.alphabet().clone();
        let c = bb.graph().parse_path("c").unwrap()[0];
        let e = bb.edge_lift(&[], c).unwrap();
        for s in ["a", "b", "a b", "b a'", "a' b a"] {
            let ax = bb.axis(&al.parse(s).unwrap()).unwrap();
            let whole = bb.horizon_member_axis(&e, &ax);
            for k in 1..4 {
                let off = Rational::new(k, 4);
                assert_eq!(bb.forward_end_beyond_point(&e, &off, &ax).unwrap(), whole);
            }
        }
    }
}
