//! Points of the universal cover, addressed by tight edge paths from the
//! lift of the base vertex. The group acts on the left: `w · α = [image(w) α]`.

use serde::{Deserialize, Serialize};

use super::graph::{push_tight, tighten, OEdge};
use super::marked::MarkedGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::Word;

/// A vertex lift `anchor`, or the point at distance `offset` along the edge
/// lift leaving that vertex. Normal form: `0 < offset < length(edge)` and the
/// edge does not undo the last anchor edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreePoint<S> {
    anchor: Vec<OEdge>,
    along: Option<(OEdge, S)>,
}

/// A geodesic walk: `edges` in order, skipping `trim_start` of the first
/// edge and `trim_end` of the last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesic<S> {
    pub edges: Vec<OEdge>,
    pub trim_start: S,
    pub trim_end: S,
    pub length: S,
}

impl<S: Scalar> TreePoint<S> {
    pub fn base() -> Self {
        TreePoint {
            anchor: Vec::new(),
            along: None,
        }
    }

    pub fn vertex(path: &[OEdge]) -> Self {
        TreePoint {
            anchor: tighten(path.iter().copied()),
            along: None,
        }
    }

    pub fn anchor(&self) -> &[OEdge] {
        &self.anchor
    }

    pub fn along(&self) -> Option<&(OEdge, S)> {
        self.along.as_ref()
    }

    pub fn is_vertex(&self) -> bool {
        self.along.is_none()
    }
}

impl<S: Scalar> MarkedGraph<S> {
    /// Point at distance `offset` from the end of `path` along `edge`.
    pub fn point_on_edge(&self, path: &[OEdge], edge: OEdge, offset: S) -> Result<TreePoint<S>> {
        let g = self.graph();
        if !g.is_path_from(self.base(), path) {
            return Err(Error::Domain("anchor is not an edge path from the base".into()));
        }
        let mut anchor = tighten(path.iter().copied());
        let at = g.end_vertex(self.base(), &anchor);
        if g.origin(edge) != at {
            return Err(Error::Domain("edge does not leave the anchor vertex".into()));
        }
        let len = g.length(edge).clone();
        if offset < S::zero() || offset > len {
            return Err(Error::Domain("offset outside the edge".into()));
        }
        if offset.is_zero() {
            return Ok(TreePoint {
                anchor,
                along: None,
            });
        }
        if offset == len {
            push_tight(&mut anchor, edge);
            return Ok(TreePoint {
                anchor,
                along: None,
            });
        }
        if anchor.last() == Some(&edge.inv()) {
            let back = anchor.pop().expect("nonempty");
            return Ok(TreePoint {
                anchor,
                along: Some((back, len - offset)),
            });
        }
        Ok(TreePoint {
            anchor,
            along: Some((edge, offset)),
        })
    }

    /// `w · p`.
    pub fn translate(&self, w: &Word, p: &TreePoint<S>) -> TreePoint<S> {
        let mut anchor = self.image(w);
        for &e in &p.anchor {
            push_tight(&mut anchor, e);
        }
        match &p.along {
            None => TreePoint {
                anchor,
                along: None,
            },
            Some((e, t)) => {
                if anchor.last() == Some(&e.inv()) {
                    let back = anchor.pop().expect("nonempty");
                    let len = self.graph().length(*e).clone();
                    TreePoint {
                        anchor,
                        along: Some((back, len - t.clone())),
                    }
                } else {
                    TreePoint {
                        anchor,
                        along: Some((*e, t.clone())),
                    }
                }
            }
        }
    }

    fn vertex_distance(&self, a: &[OEdge], b: &[OEdge]) -> S {
        let k = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        self.graph().path_length(&a[k..]) + self.graph().path_length(&b[k..])
    }

    fn vertex_path(a: &[OEdge], b: &[OEdge]) -> Vec<OEdge> {
        let k = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        let mut out: Vec<OEdge> = a[k..].iter().rev().map(|e| e.inv()).collect();
        out.extend_from_slice(&b[k..]);
        out
    }

    /// Endpoints of the edge carrying `p`: `(vertex, distance from p, edge from p to it)`.
    fn ends(&self, p: &TreePoint<S>) -> Vec<(Vec<OEdge>, S, Option<OEdge>)> {
        match &p.along {
            None => vec![(p.anchor.clone(), S::zero(), None)],
            Some((e, t)) => {
                let len = self.graph().length(*e).clone();
                let mut far = p.anchor.clone();
                far.push(*e);
                vec![
                    (p.anchor.clone(), t.clone(), Some(e.inv())),
                    (far, len - t.clone(), Some(*e)),
                ]
            }
        }
    }

    pub fn distance(&self, p: &TreePoint<S>, q: &TreePoint<S>) -> S {
        if let (Some((e, t)), Some((f, s))) = (&p.along, &q.along) {
            if p.anchor == q.anchor && e == f {
                return (t.clone() - s.clone()).abs();
            }
        }
        let mut best: Option<S> = None;
        for (x, dx, _) in self.ends(p) {
            for (y, dy, _) in self.ends(q) {
                let d = dx.clone() + self.vertex_distance(&x, &y) + dy;
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
        best.expect("at least one pair of ends")
    }

    pub fn geodesic(&self, p: &TreePoint<S>, q: &TreePoint<S>) -> Geodesic<S> {
        let g = self.graph();
        if let (Some((e, t)), Some((f, s))) = (&p.along, &q.along) {
            if p.anchor == q.anchor && e == f {
                let len = g.length(*e).clone();
                if t == s {
                    return Geodesic {
                        edges: Vec::new(),
                        trim_start: S::zero(),
                        trim_end: S::zero(),
                        length: S::zero(),
                    };
                }
                let (edge, a, b) = if t < s {
                    (*e, t.clone(), len.clone() - s.clone())
                } else {
                    (e.inv(), len.clone() - t.clone(), s.clone())
                };
                let length = len - a.clone() - b.clone();
                return Geodesic {
                    edges: vec![edge],
                    trim_start: a,
                    trim_end: b,
                    length,
                };
            }
        }
        let mut best: Option<(S, Vec<OEdge>, S, S)> = None;
        for (x, dx, ex) in self.ends(p) {
            for (y, dy, ey) in self.ends(q) {
                let d = dx.clone() + self.vertex_distance(&x, &y) + dy.clone();
                if best.as_ref().is_none_or(|b| d < b.0) {
                    let mut edges = Vec::new();
                    let mut trim_start = S::zero();
                    let mut trim_end = S::zero();
                    if let Some(e) = ex {
                        trim_start = g.length(e).clone() - dx.clone();
                        edges.push(e);
                    }
                    edges.extend(Self::vertex_path(&x, &y));
                    if let Some(f) = ey {
                        trim_end = g.length(f).clone() - dy.clone();
                        edges.push(f.inv());
                    }
                    best = Some((d, edges, trim_start, trim_end));
                }
            }
        }
        let (length, edges, trim_start, trim_end) = best.expect("nonempty");
        Geodesic {
            edges,
            trim_start,
            trim_end,
            length,
        }
    }

    /// `d(p, w · p)`.
    pub fn based_length(&self, p: &TreePoint<S>, w: &Word) -> S {
        if p.along.is_none() {
            // d(α, wα) = |[ᾱ image(w) α]|
            let mut path: Vec<OEdge> = p.anchor.iter().rev().map(|e| e.inv()).collect();
            for e in self.image(w) {
                push_tight(&mut path, e);
            }
            for &e in &p.anchor {
                push_tight(&mut path, e);
            }
            return self.graph().path_length(&path);
        }
        self.distance(p, &self.translate(w, p))
    }

    pub fn checked_based_length(&self, p: &TreePoint<S>, w: &Word) -> Result<S> {
        self.alphabet().check(w)?;
        Ok(self.based_length(p, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgraph::presets::{barbell, rose};
    use crate::words::Alphabet;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rose_based_lengths() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let a = al.parse("a").unwrap();
        assert_eq!(r.based_length(&TreePoint::base(), &a), q(1, 1));
        let b_edge = r.graph().parse_path("b").unwrap()[0];
        let mid = r.point_on_edge(&[], b_edge, q(1, 2)).unwrap();
        assert_eq!(r.based_length(&mid, &a), q(2, 1));
        assert_eq!(r.based_length(&mid, &Word::identity()), q(0, 1));
    }

    #[test]
    fn point_normal_form() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let a = r.graph().parse_path("a").unwrap()[0];
        let p = r.point_on_edge(&[a], a.inv(), q(1, 4)).unwrap();
        let p2 = r.point_on_edge(&[], a, q(3, 4)).unwrap();
        assert_eq!(p, p2);
        assert_eq!(r.point_on_edge(&[], a, q(1, 1)).unwrap(), TreePoint::vertex(&[a]));
        assert!(r.point_on_edge(&[], a, q(2, 1)).is_err());
    }

    #[test]
    fn geodesics() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let base = TreePoint::<Rational>::base();
        let g = r.geodesic(&base, &base);
        assert!(g.edges.is_empty());
        assert_eq!(g.length, q(0, 1));
        let ba = r.translate(&al.parse("a").unwrap(), &base);
        let g = r.geodesic(&base, &ba);
        assert_eq!(r.graph().format_path(&g.edges), "a");
        assert_eq!(g.length, q(1, 1));

        let bb = barbell::<Rational>();
        let v2 = TreePoint::vertex(&bb.graph().parse_path("c").unwrap());
        let v2b = bb.translate(&bb.alphabet().parse("b").unwrap(), &v2);
        let base = TreePoint::base();
        let g = bb.geodesic(&base, &v2b);
        assert_eq!(bb.graph().format_path(&g.edges), "c b");
        assert_eq!(g.length, q(2, 1));
        assert_eq!(bb.distance(&base, &v2b), q(2, 1));
    }

    #[test]
    fn interior_geodesics_and_distances() {
        let bb = barbell::<Rational>();
        let g = bb.graph();
        let c = g.parse_path("c").unwrap()[0];
        let a = g.parse_path("a").unwrap()[0];
        let p = bb.point_on_edge(&[], c, q(1, 3)).unwrap();
        let r = bb.point_on_edge(&[], a, q(1, 2)).unwrap();
        assert_eq!(bb.distance(&p, &r), q(5, 6));
        let geo = bb.geodesic(&p, &r);
        assert_eq!(geo.length, q(5, 6));
        assert_eq!(g.format_path(&geo.edges), "~c a");
        assert_eq!(geo.trim_start, q(2, 3));
        assert_eq!(geo.trim_end, q(1, 2));
        let p2 = bb.point_on_edge(&[], c, q(3, 4)).unwrap();
        let geo = bb.geodesic(&p2, &p);
        assert_eq!(geo.length, q(5, 12));
        assert_eq!(geo.edges, vec![c.inv()]);
    }
}
