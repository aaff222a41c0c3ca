use crate::error::{Error, Result};
use crate::mgraph::{AxisDescriptor, AxisRelation, EdgeLift, MarkedGraph, TreePoint};
use crate::scalar::{min_of, Scalar};
use crate::words::Word;

/// Increments allowed past the starting exponent.
pub const MAX_INCREMENTS: u64 = 32;

/// `f = gⁿ h⁻ⁿ` (the left-action form of the product whose axis joins the
/// forward ends of `g` and `h⁻¹`).
pub fn axis_product(g: &Word, h: &Word, n: u64) -> Word {
    g.pow(n as i64).concat(&h.pow(-(n as i64)))
}

/// Starting exponent: `⌊(d(o(e), a) + len(e) + len(a)) / min{ℓ(g), ℓ(h)}⌋ + 1`
/// where `a` is the bridge or intersection of the two axes; `1` if the axes
/// coincide.
fn start_exponent<S: Scalar>(
    t: &MarkedGraph<S>,
    e: &EdgeLift,
    ag: &AxisDescriptor<S>,
    ah: &AxisDescriptor<S>,
) -> u64 {
    let o = TreePoint::vertex(&e.anchor);
    let len_e = t.graph().length(e.edge).clone();
    let (p, len_a) = match t.relate_axes(ag, ah) {
        AxisRelation::Overlap { length: None, .. } => return 1,
        AxisRelation::Disjoint {
            distance, from, ..
        } => (from, distance),
        AxisRelation::Point(p) => (p, S::zero()),
        AxisRelation::Overlap {
            length: Some(l),
            from,
            ..
        } => (from, l),
    };
    // d(o(e), p) bounds d(e, a) from above; a larger start is still valid.
    let num = t.distance(&o, &p) + len_e + len_a;
    let den = min_of(
        ag.translation_length.clone(),
        ah.translation_length.clone(),
    );
    (num / den).ceil_u64().unwrap_or(1).max(1) + 1
}

fn require_member<S: Scalar>(t: &MarkedGraph<S>, e: &EdgeLift, w: &Word, what: &str) -> Result<()> {
    if !t.horizon_member(e, w)? {
        return Err(Error::Precondition(format!(
            "{} is not in the horizon of {what}",
            t.alphabet().format(w)
        )));
    }
    Ok(())
}

/// Whether `e` lies on the axis of `f` with the same orientation.
pub fn crosses<S: Scalar>(t: &MarkedGraph<S>, e: &EdgeLift, f: &Word) -> Result<bool> {
    if f.is_identity() {
        return Ok(false);
    }
    let ax = t.axis(f)?;
    Ok(t.edge_on_axis(e, &ax))
}

/// Whether the axis of `f` lies in the component of `T ∖ e°` containing `t(e)`.
pub fn beyond<S: Scalar>(t: &MarkedGraph<S>, e: &EdgeLift, f: &Word) -> Result<bool> {
    if f.is_identity() {
        return Ok(false);
    }
    let ax = t.axis(f)?;
    Ok(t.horizon_member_axis(e, &ax)
        && t.horizon_member_axis(e, &ax.reversed())
        && !t.edge_on_axis(e, &ax)
        && !t.edge_on_axis(&e.reversed(), &ax))
}

/// For `g ∈ ⟨e⟩`, `h ∈ ⟨ē⟩`: an `n` with `e ⊆ C_f`, `f = gⁿh⁻ⁿ`, orientations
/// agreeing. The exponent starts at the bound from the axes' relative
/// position and is raised until the crossing is verified.
pub fn arc_axis_witness<S: Scalar>(
    t: &MarkedGraph<S>,
    e: &EdgeLift,
    g: &Word,
    h: &Word,
) -> Result<(u64, Word)> {
    require_member(t, e, g, "e")?;
    require_member(t, &e.reversed(), h, "ē")?;
    let (ag, ah) = (t.axis(g)?, t.axis(h)?);
    let n0 = start_exponent(t, e, &ag, &ah);
    for n in n0..=n0 + MAX_INCREMENTS {
        let f = axis_product(g, h, n);
        if crosses(t, e, &f)? {
            return Ok((n, f));
        }
    }
    Err(Error::EscalationExhausted {
        steps: MAX_INCREMENTS as u32,
        what: "no exponent put the edge on the product axis".into(),
    })
}

/// For `g, h ∈ ⟨e⟩` with different forward ends: an `n` with the axis of
/// `f = gⁿh⁻ⁿ` inside the `t(e)` side of `e`.
pub fn pos_axis_witness<S: Scalar>(
    t: &MarkedGraph<S>,
    e: &EdgeLift,
    g: &Word,
    h: &Word,
) -> Result<(u64, Word)> {
    require_member(t, e, g, "e")?;
    require_member(t, e, h, "e")?;
    if g.root().0 == h.root().0 {
        return Err(Error::Precondition("the two elements have the same forward end".into()));
    }
    let (ag, ah) = (t.axis(g)?, t.axis(h)?);
    let n0 = start_exponent(t, e, &ag, &ah);
    for n in n0..=n0 + MAX_INCREMENTS {
        let f = axis_product(g, h, n);
        if beyond(t, e, &f)? {
            return Ok((n, f));
        }
    }
    Err(Error::EscalationExhausted {
        steps: MAX_INCREMENTS as u32,
        what: "no exponent moved the product axis past the edge".into(),
    })
}

/// Whether the axes of `g` and `h` share a ray (for free actions: the same
/// line).
pub fn unbounded_overlap<S: Scalar>(t: &MarkedGraph<S>, g: &Word, h: &Word) -> Result<bool> {
    Ok(matches!(
        t.relate(g, h)?,
        AxisRelation::Overlap { length: None, .. }
    ))
}

/// Replaces `g` by `gᴺ s g⁻ᴺ` for the first `s` among `candidates` whose axis
/// meets that of `alpha` in a bounded set, choosing `N` so the conjugate
/// stays in `keep` (a horizon test in each tree).
pub fn bounded_representative<S, F>(
    t: &MarkedGraph<S>,
    g: &Word,
    alpha: &Word,
    candidates: &[Word],
    keep: F,
) -> Result<Word>
where
    S: Scalar,
    F: Fn(&Word) -> Result<bool>,
{
    if !unbounded_overlap(t, g, alpha)? {
        return Ok(g.clone());
    }
    for s in candidates.iter().filter(|s| !s.is_identity()) {
        if unbounded_overlap(t, s, alpha)? {
            continue;
        }
        for n in 1..=MAX_INCREMENTS {
            let gn = g.pow(n as i64);
            let c = gn.concat(s).concat(&gn.inverse());
            if keep(&c)? && !unbounded_overlap(t, &c, alpha)? {
                return Ok(c);
            }
        }
    }
    Err(Error::EscalationExhausted {
        steps: MAX_INCREMENTS as u32,
        what: "no conjugate with a bounded axis intersection".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgraph::presets::{barbell, rose};
    use crate::words::Alphabet;
    use crate::Rational;

    #[test]
    fn rose_petal() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let a = r.graph().parse_path("a").unwrap()[0];
        let e = r.edge_lift(&[], a).unwrap();
        let w = |s: &str| al.parse(s).unwrap();
        let (n, f) = arc_axis_witness(&r, &e, &w("a"), &w("a'")).unwrap();
        assert_eq!((n, f), (1, w("a a")));
        let (_, f) = arc_axis_witness(&r, &e, &w("a b"), &w("b a'")).unwrap();
        assert!(crosses(&r, &e, &f).unwrap());
        assert!(arc_axis_witness(&r, &e, &w("a'"), &w("a")).is_err());
        let (_, f) = pos_axis_witness(&r, &e, &w("a"), &w("a b a'")).unwrap();
        assert!(beyond(&r, &e, &f).unwrap());
        assert!(pos_axis_witness(&r, &e, &w("a"), &w("a")).is_err());
    }

    #[test]
    fn barbell_bridge() {
        let bb = barbell::<Rational>();
        let al = bb.alphabet().clone();
        let c = bb.graph().parse_path("c").unwrap()[0];
        let e = bb.edge_lift(&[], c).unwrap();
        let w = |s: &str| al.parse(s).unwrap();
        // Forward across c is the b side.
        assert!(bb.horizon_member(&e, &w("b")).unwrap());
        assert!(bb.horizon_member(&e.reversed(), &w("a")).unwrap());
        let (_, f) = arc_axis_witness(&bb, &e, &w("b"), &w("a")).unwrap();
        assert!(crosses(&bb, &e, &f).unwrap());
        let (_, f) = pos_axis_witness(&bb, &e.reversed(), &w("a"), &w("a b a'")).unwrap();
        assert!(beyond(&bb, &e.reversed(), &f).unwrap());
    }

    #[test]
    fn representative_adjustment() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let w = |s: &str| al.parse(s).unwrap();
        let a = r.graph().parse_path("a").unwrap()[0];
        let e = r.edge_lift(&[], a).unwrap();
        assert_eq!(
            bounded_representative(&r, &w("a b"), &w("b a"), &[], |_| Ok(true)).unwrap(),
            w("a b")
        );
        let cands = [w("b")];
        let g = bounded_representative(&r, &w("a"), &w("a a"), &cands, |x| r.horizon_member(&e, x))
            .unwrap();
        assert!(!unbounded_overlap(&r, &g, &w("a a")).unwrap());
        assert!(r.horizon_member(&e, &g).unwrap());
    }
}
