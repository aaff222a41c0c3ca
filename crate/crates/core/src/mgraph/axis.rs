use serde::{Deserialize, Serialize};

use super::cover::TreePoint;
use super::graph::{cyclic_split, OEdge};
use super::marked::MarkedGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{CyclicWord, Word};

/// The axis of a hyperbolic element: `image(w) = u c ū` with `c` cyclically
/// tight. Its vertices are `u cⁿ` (and prefixes); `u` ends at the projection
/// of the base lift, and `w` translates along the direction of `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisDescriptor<S> {
    pub word: Word,
    pub element: CyclicWord,
    pub entry: Vec<OEdge>,
    pub period: Vec<OEdge>,
    pub translation_length: S,
}

impl<S: Scalar> AxisDescriptor<S> {
    /// Axis of the inverse: same line, opposite orientation.
    pub fn reversed(&self) -> Self {
        AxisDescriptor {
            word: self.word.inverse(),
            element: CyclicWord::of(&self.word.inverse()),
            entry: self.entry.clone(),
            period: self.period.iter().rev().map(|e| e.inv()).collect(),
            translation_length: self.translation_length.clone(),
        }
    }

    /// Edge `i` of the axis counted from the entry vertex (negative indices go
    /// backwards), oriented along the axis.
    pub fn edge_at(&self, i: i64) -> OEdge {
        let m = self.period.len() as i64;
        if i >= 0 {
            self.period[(i % m) as usize]
        } else {
            let j = (-i - 1) % m;
            self.period[(m - 1 - j) as usize]
        }
    }

    /// Anchor of the axis vertex `i` edges from the entry vertex.
    pub fn vertex_at(&self, i: i64) -> Vec<OEdge> {
        let mut out = self.entry.clone();
        if i >= 0 {
            for k in 0..i {
                out.push(self.edge_at(k));
            }
        } else {
            for k in 1..=-i {
                out.push(self.edge_at(-k).inv());
            }
        }
        out
    }
}

/// Geometric relation between two axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxisRelation<S> {
    /// Disjoint axes; `bridge` runs from the first axis to the second.
    Disjoint {
        distance: S,
        bridge: Vec<OEdge>,
        from: TreePoint<S>,
    },
    /// The axes meet in a single vertex.
    Point(TreePoint<S>),
    /// Shared arc of positive length; `None` when the axes coincide.
    /// `arc` is oriented along the first axis.
    Overlap {
        length: Option<S>,
        agree: bool,
        from: TreePoint<S>,
        arc: Vec<OEdge>,
    },
}

impl<S: Scalar> MarkedGraph<S> {
    pub fn axis(&self, w: &Word) -> Result<AxisDescriptor<S>> {
        self.alphabet().check(w)?;
        if w.is_identity() {
            return Err(Error::TrivialElement(self.alphabet().format(w)));
        }
        let p = self.image(w);
        let (u, c) = cyclic_split(&p);
        Ok(AxisDescriptor {
            word: w.clone(),
            element: CyclicWord::of(w),
            entry: u.to_vec(),
            period: c.to_vec(),
            translation_length: self.graph().path_length(c),
        })
    }

    /// `d(p, C_w) = (d(p, w·p) − ℓ(w)) / 2`.
    pub fn distance_to_axis(&self, p: &TreePoint<S>, axis: &AxisDescriptor<S>) -> S {
        (self.based_length(p, &axis.word) - axis.translation_length.clone()).half()
    }

    pub fn on_axis(&self, p: &TreePoint<S>, axis: &AxisDescriptor<S>) -> bool {
        self.based_length(p, &axis.word) == axis.translation_length
    }

    /// Classifies the relative position of the axes of `g` and `h`.
    pub fn relate(&self, g: &Word, h: &Word) -> Result<AxisRelation<S>> {
        let ag = self.axis(g)?;
        let ah = self.axis(h)?;
        Ok(self.relate_axes(&ag, &ah))
    }

    pub fn relate_axes(&self, ag: &AxisDescriptor<S>, ah: &AxisDescriptor<S>) -> AxisRelation<S> {
        let (rg, _) = ag.word.root();
        let (rh, _) = ah.word.root();
        if rg == rh || rg == rh.inverse() {
            return AxisRelation::Overlap {
                length: None,
                agree: rg == rh,
                from: TreePoint::vertex(&ag.entry),
                arc: Vec::new(),
            };
        }
        // The intersection and the bridge foot on C_g both lie within this many
        // edges of the entry vertex of C_g; the overlap has fewer than
        // |period g| + |period h| edges.
        let radius = (ag.entry.len() + ah.entry.len() + ag.period.len() + ah.period.len() + 1)
            as i64;
        let members: Vec<i64> = (-radius..=radius)
            .filter(|&i| self.on_axis(&TreePoint::vertex(&ag.vertex_at(i)), ah))
            .collect();
        if let (Some(&lo), Some(&hi)) = (members.first(), members.last()) {
            debug_assert!(lo > -radius && hi < radius, "window too small");
            debug_assert_eq!((hi - lo + 1) as usize, members.len());
            let from = TreePoint::vertex(&ag.vertex_at(lo));
            if lo == hi {
                return AxisRelation::Point(from);
            }
            let arc: Vec<OEdge> = (lo..hi).map(|i| ag.edge_at(i)).collect();
            let length = self.graph().path_length(&arc);
            let to = TreePoint::vertex(&ag.vertex_at(hi));
            // On the line C_h, `to` lies ahead of `from` iff d(to, h·from) = |ℓ_h − N|.
            let moved = self.translate(&ah.word, &from);
            let agree = self.distance(&to, &moved)
                != ah.translation_length.clone() + length.clone();
            return AxisRelation::Overlap {
                length: Some(length),
                agree,
                from,
                arc,
            };
        }
        let mut best: Option<(S, i64)> = None;
        for i in -radius..=radius {
            let d = self.distance_to_axis(&TreePoint::vertex(&ag.vertex_at(i)), ah);
            if best.as_ref().is_none_or(|(b, _)| d < *b) {
                best = Some((d, i));
            }
        }
        let (distance, i) = best.expect("nonempty window");
        let foot_g = ag.vertex_at(i);
        let radius_h =
            (ag.entry.len() + ah.entry.len() + ag.period.len() + ah.period.len() + 1) as i64;
        let j = (-radius_h..=radius_h)
            .find(|&j| {
                let v = TreePoint::vertex(&ah.vertex_at(j));
                self.distance(&TreePoint::vertex(&foot_g), &v) == distance
            })
            .expect("bridge foot on the second axis lies in the window");
        let foot_h = ah.vertex_at(j);
        let k = foot_g.iter().zip(&foot_h).take_while(|(x, y)| x == y).count();
        let mut bridge: Vec<OEdge> = foot_g[k..].iter().rev().map(|e| e.inv()).collect();
        bridge.extend_from_slice(&foot_h[k..]);
        AxisRelation::Disjoint {
            distance,
            bridge,
            from: TreePoint::vertex(&foot_g),
        }
    }

    /// A vertex lying on every listed axis, if the common intersection is a
    /// single vertex.
    pub fn common_point(&self, words: &[Word]) -> Result<Option<TreePoint<S>>> {
        let axes: Vec<AxisDescriptor<S>> =
            words.iter().map(|w| self.axis(w)).collect::<Result<_>>()?;
        let first = &axes[0];
        let radius: usize = axes
            .iter()
            .map(|a| a.entry.len() + a.period.len())
            .sum::<usize>()
            + 1;
        let radius = radius as i64;
        let hits: Vec<i64> = (-radius..=radius)
            .filter(|&i| {
                let p = TreePoint::vertex(&first.vertex_at(i));
                axes[1..].iter().all(|a| self.on_axis(&p, a))
            })
            .collect();
        match hits.as_slice() {
            [i] => Ok(Some(TreePoint::vertex(&first.vertex_at(*i)))),
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgraph::presets::{barbell, rose};
    use crate::words::Alphabet;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rose_axes() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let ax = r.axis(&al.parse("a").unwrap()).unwrap();
        assert_eq!(r.graph().format_path(&ax.period), "a");
        assert!(ax.entry.is_empty());
        let ax = r.axis(&al.parse("b a b'").unwrap()).unwrap();
        assert_eq!(r.graph().format_path(&ax.period), "a");
        assert_eq!(r.graph().format_path(&ax.entry), "b");
        assert!(matches!(
            r.axis(&Word::identity()),
            Err(Error::TrivialElement(_))
        ));
        let rev = ax.reversed();
        assert_eq!(r.graph().format_path(&rev.period), "~a");
    }

    #[test]
    fn barbell_axis() {
        let bb = barbell::<Rational>();
        let ax = bb.axis(&bb.alphabet().parse("a b").unwrap()).unwrap();
        assert_eq!(bb.graph().format_path(&ax.period), "a c b ~c");
        assert_eq!(ax.translation_length, q(4));
    }

    #[test]
    fn axis_vertices_lie_on_axis() {
        let bb = barbell::<Rational>();
        let al = bb.alphabet().clone();
        for s in ["a b", "b a b'", "a a b'", "b' a b a"] {
            let ax = bb.axis(&al.parse(s).unwrap()).unwrap();
            for i in -6..=6 {
                assert!(bb.on_axis(&TreePoint::vertex(&ax.vertex_at(i)), &ax), "{s} {i}");
            }
            assert_eq!(bb.distance_to_axis(&TreePoint::base(), &ax), bb.graph().path_length(&ax.entry));
        }
    }

    #[test]
    fn relations() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let w = |s: &str| al.parse(s).unwrap();
        assert!(matches!(r.relate(&w("a"), &w("b")).unwrap(), AxisRelation::Point(_)));
        match r.relate(&w("a b"), &w("b")).unwrap() {
            AxisRelation::Overlap {
                length: Some(n),
                agree: true,
                ..
            } => assert_eq!(n, q(1)),
            other => panic!("{other:?}"),
        }
        match r.relate(&w("a b"), &w("b'")).unwrap() {
            AxisRelation::Overlap { agree: false, .. } => {}
            other => panic!("{other:?}"),
        }
        match r.relate(&w("a^2"), &w("a'")).unwrap() {
            AxisRelation::Overlap {
                length: None,
                agree: false,
                ..
            } => {}
            other => panic!("{other:?}"),
        }
        let bb = barbell::<Rational>();
        match bb.relate(&w("a"), &w("b")).unwrap() {
            AxisRelation::Disjoint {
                distance, bridge, ..
            } => {
                assert_eq!(distance, q(1));
                assert_eq!(bb.graph().format_path(&bridge), "c");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triple_point_of_good_pair() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let g = al.parse("a a b").unwrap();
        let h = al.parse("a a b'").unwrap();
        let p = r
            .common_point(&[g.clone(), h.clone(), g.concat(&h.inverse())])
            .unwrap()
            .expect("single common vertex");
        assert_eq!(r.graph().format_path(p.anchor()), "a a");
    }
}
