use rayon::prelude::*;

use super::witness::{arc_axis_witness, axis_product, beyond, bounded_representative, crosses, pos_axis_witness, MAX_INCREMENTS};
use crate::error::{Error, Result};
use crate::lfcore::{classify_pair, Orientation, PairClass, PairKind};
use crate::mgraph::{AxisDescriptor, AxisRelation, EdgeLift, MarkedGraph, OEdge};
use crate::scalar::Scalar;
use crate::words::Word;

use crate::lfcore::nontrivial_words;

/// Word-length and anchor-length limits for [`rectangle_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_word_len: usize,
    pub max_anchor_len: usize,
}

impl SearchBudget {
    pub fn new(max_word_len: usize, max_anchor_len: usize) -> Result<Self> {
        if max_word_len == 0 || max_anchor_len == 0 {
            return Err(Error::Precondition("search budgets must be positive".into()));
        }
        Ok(SearchBudget {
            max_word_len,
            max_anchor_len,
        })
    }
}

/// Oriented edges `a` of `A` and `b` of `B` with one witness in each of
/// `⟨a⟩∩⟨b⟩`, `⟨ā⟩∩⟨b⟩`, `⟨a⟩∩⟨b̄⟩`, `⟨ā⟩∩⟨b̄⟩`, in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleCertificate {
    pub a: EdgeLift,
    pub b: EdgeLift,
    pub witnesses: [Word; 4],
}

/// `(forward in A, forward in B)` for each witness slot.
pub const CORNERS: [(bool, bool); 4] = [(true, true), (false, true), (true, false), (false, false)];

impl RectangleCertificate {
    pub fn witness(&self, a_forward: bool, b_forward: bool) -> &Word {
        let i = CORNERS
            .iter()
            .position(|&c| c == (a_forward, b_forward))
            .expect("four corners");
        &self.witnesses[i]
    }

    /// Re-checks every horizon membership in both trees.
    pub fn verify<S: Scalar>(&self, ta: &MarkedGraph<S>, tb: &MarkedGraph<S>) -> Result<()> {
        same_group(ta, tb)?;
        let a = ta.edge_lift(&self.a.anchor, self.a.edge)?;
        let b = tb.edge_lift(&self.b.anchor, self.b.edge)?;
        let (ar, br) = (a.reversed(), b.reversed());
        for (w, &(fa, fb)) in self.witnesses.iter().zip(&CORNERS) {
            let ea = if fa { &a } else { &ar };
            let eb = if fb { &b } else { &br };
            if !ta.horizon_member(ea, w)? || !tb.horizon_member(eb, w)? {
                return Err(Error::Certificate(format!(
                    "{} is not in the {}{} horizon corner",
                    ta.alphabet().format(w),
                    if fa { "a" } else { "ā" },
                    if fb { "b" } else { "b̄" }
                )));
            }
        }
        Ok(())
    }
}

fn same_group<S: Scalar>(ta: &MarkedGraph<S>, tb: &MarkedGraph<S>) -> Result<()> {
    if ta.alphabet() != tb.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            ta.alphabet().names(),
            tb.alphabet().names()
        )));
    }
    Ok(())
}

/// Shortest tight path from the base vertex to `v`.
fn path_to<S: Scalar>(t: &MarkedGraph<S>, v: usize) -> Vec<OEdge> {
    let g = t.graph();
    let mut prev: Vec<Option<OEdge>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[t.base()] = true;
    let mut queue = std::collections::VecDeque::from([t.base()]);
    while let Some(u) = queue.pop_front() {
        for e in g.star(u) {
            let w = g.terminus(e);
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut u = v;
    while let Some(e) = prev[u] {
        path.push(e);
        u = g.origin(e);
    }
    path.reverse();
    path
}

/// One lift of each oriented edge of `A`.
pub fn orbit_representatives<S: Scalar>(t: &MarkedGraph<S>) -> Vec<EdgeLift> {
    let g = t.graph();
    let mut out = Vec::new();
    for k in 0..g.edge_count() as u32 {
        let e = OEdge::forward(k);
        let lift = EdgeLift {
            anchor: path_to(t, g.origin(e)),
            edge: e,
        };
        let rev = lift.reversed();
        out.push(lift);
        out.push(rev);
    }
    out
}

/// Every edge lift leaving a vertex at tight distance `≤ max_anchor` edges
/// from the base lift, ordered by anchor length, anchor, then edge.
pub fn ball_lifts<S: Scalar>(t: &MarkedGraph<S>, max_anchor: usize) -> Vec<EdgeLift> {
    let g = t.graph();
    let mut anchors: Vec<Vec<OEdge>> = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_anchor {
        let mut next = Vec::new();
        for p in &frontier {
            let v = g.end_vertex(t.base(), p);
            for e in g.star(v) {
                if p.last() != Some(&e.inv()) {
                    let mut q: Vec<OEdge> = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        anchors.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::new();
    for p in anchors {
        let v = g.end_vertex(t.base(), &p);
        for e in g.star(v) {
            out.push(EdgeLift {
                anchor: p.clone(),
                edge: e,
            });
        }
    }
    out
}

/// Membership bitsets of `words` in `⟨e⟩` and `⟨ē⟩`.
fn horizon_bits<S: Scalar>(
    t: &MarkedGraph<S>,
    e: &EdgeLift,
    axes: &[AxisDescriptor<S>],
) -> (Vec<u64>, Vec<u64>) {
    let blocks = axes.len().div_ceil(64);
    let mut fwd = vec![0u64; blocks];
    let mut bwd = vec![0u64; blocks];
    let er = e.reversed();
    for (i, ax) in axes.iter().enumerate() {
        if t.horizon_member_axis(e, ax) {
            fwd[i / 64] |= 1 << (i % 64);
        }
        if t.horizon_member_axis(&er, ax) {
            bwd[i / 64] |= 1 << (i % 64);
        }
    }
    (fwd, bwd)
}

fn first_common(x: &[u64], y: &[u64]) -> Option<usize> {
    x.iter()
        .zip(y)
        .enumerate()
        .find_map(|(k, (a, b))| {
            let m = a & b;
            (m != 0).then(|| k * 64 + m.trailing_zeros() as usize)
        })
}

/// Outcome of [`rectangle_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RectangleSearch {
    Found(RectangleCertificate),
    NotFoundUpToBudget { a_lifts: usize, b_lifts: usize, words: usize },
}

/// First rectangle in canonical order: `A`-lifts from
/// [`orbit_representatives`], `B`-lifts from [`ball_lifts`], witnesses in
/// shortlex order. Horizons are tested on whole edges, which suffices in a
/// simplicial tree because directions are constant along an open edge.
pub fn rectangle_search<S: Scalar>(
    ta: &MarkedGraph<S>,
    tb: &MarkedGraph<S>,
    budget: SearchBudget,
) -> Result<RectangleSearch> {
    same_group(ta, tb)?;
    let words = nontrivial_words(ta.alphabet().rank(), budget.max_word_len);
    let axes_a: Vec<AxisDescriptor<S>> = words.par_iter().map(|w| ta.axis(w)).collect::<Result<_>>()?;
    let axes_b: Vec<AxisDescriptor<S>> = words.par_iter().map(|w| tb.axis(w)).collect::<Result<_>>()?;
    let a_lifts = orbit_representatives(ta);
    let b_lifts = ball_lifts(tb, budget.max_anchor_len);
    let bits_a: Vec<(Vec<u64>, Vec<u64>)> =
        a_lifts.par_iter().map(|e| horizon_bits(ta, e, &axes_a)).collect();
    let bits_b: Vec<(Vec<u64>, Vec<u64>)> =
        b_lifts.par_iter().map(|e| horizon_bits(tb, e, &axes_b)).collect();
    let hit = (0..a_lifts.len()).find_map(|i| {
        let (af, ab) = &bits_a[i];
        (0..b_lifts.len()).find_map(|j| {
            let (bf, bb) = &bits_b[j];
            let w0 = first_common(af, bf)?;
            let w1 = first_common(ab, bf)?;
            let w2 = first_common(af, bb)?;
            let w3 = first_common(ab, bb)?;
            Some(RectangleCertificate {
                a: a_lifts[i].clone(),
                b: b_lifts[j].clone(),
                witnesses: [w0, w1, w2, w3].map(|k| words[k].clone()),
            })
        })
    });
    Ok(match hit {
        Some(c) => RectangleSearch::Found(c),
        None => RectangleSearch::NotFoundUpToBudget {
            a_lifts: a_lifts.len(),
            b_lifts: b_lifts.len(),
            words: words.len(),
        },
    })
}

/// Pairs extracted from a rectangle, each re-checked with length values only.
#[derive(Clone, Debug)]
pub struct RectanglePairs<S> {
    /// `(ρ, σ) ∈ D^A ∩ O^B`.
    pub rho: Word,
    pub sigma: Word,
    pub n: u64,
    pub m: u64,
    pub class_a: PairClass<S>,
    pub class_b: PairClass<S>,
    /// `(c, γ) ∈ O^A ∩ O^B`, agreeing in `A` and opposing in `B`.
    pub c: Word,
    pub gamma: Word,
    pub j: u64,
    pub k: u64,
    pub clash_a: PairClass<S>,
    pub clash_b: PairClass<S>,
}

/// Smallest exponent `≥ start` passing every check.
fn common_exponent<F>(start: u64, ok: F) -> Result<u64>
where
    F: Fn(u64) -> Result<bool>,
{
    for n in start..=start + MAX_INCREMENTS {
        if ok(n)? {
            return Ok(n);
        }
    }
    Err(Error::EscalationExhausted {
        steps: MAX_INCREMENTS as u32,
        what: "no common exponent for both trees".into(),
    })
}

/// Builds `ρ = gᴺα⁻ᴺ`, `σ = hᴹβ⁻ᴹ` and the clash pair `c = gᴶβ⁻ᴶ`,
/// `γ = αᴷh⁻ᴷ` from the witnesses `g ∈ ⟨a⟩∩⟨b⟩`, `h ∈ ⟨ā⟩∩⟨b⟩`,
/// `α ∈ ⟨a⟩∩⟨b̄⟩`, `β ∈ ⟨ā⟩∩⟨b̄⟩`, then confirms both pairs with
/// [`classify_pair`] on the translation length functions.
pub fn certificate_from_rectangle<S: Scalar>(
    ta: &MarkedGraph<S>,
    tb: &MarkedGraph<S>,
    rect: &RectangleCertificate,
) -> Result<RectanglePairs<S>> {
    rect.verify(ta, tb)?;
    let (a, b) = (&rect.a, &rect.b);
    let (ar, br) = (a.reversed(), b.reversed());
    let mut g = rect.witness(true, true).clone();
    let mut h = rect.witness(false, true).clone();
    let alpha = rect.witness(true, false).clone();
    let beta = rect.witness(false, false).clone();

    // Bounded axis intersections in A for (g, α) and in B for (h, β).
    let cands = nontrivial_words(ta.alphabet().rank(), 2);
    g = bounded_representative(ta, &g, &alpha, &cands, |x| {
        Ok(ta.horizon_member(a, x)? && tb.horizon_member(b, x)?)
    })?;
    h = bounded_representative(tb, &h, &beta, &cands, |x| {
        Ok(ta.horizon_member(&ar, x)? && tb.horizon_member(b, x)?)
    })?;

    let (nb, _) = arc_axis_witness(tb, b, &g, &alpha)?;
    let (na, _) = pos_axis_witness(ta, a, &g, &alpha)?;
    let n = common_exponent(na.max(nb), |n| {
        let f = axis_product(&g, &alpha, n);
        Ok(crosses(tb, b, &f)? && beyond(ta, a, &f)?)
    })?;
    let (mb, _) = arc_axis_witness(tb, b, &h, &beta)?;
    let (ma, _) = pos_axis_witness(ta, &ar, &h, &beta)?;
    let m = common_exponent(ma.max(mb), |m| {
        let f = axis_product(&h, &beta, m);
        Ok(crosses(tb, b, &f)? && beyond(ta, &ar, &f)?)
    })?;
    let rho = axis_product(&g, &alpha, n);
    let sigma = axis_product(&h, &beta, m);
    let class_a = classify_pair(ta, &rho, &sigma)?;
    let class_b = classify_pair(tb, &rho, &sigma)?;
    if class_a.kind != PairKind::Disjoint || class_b.kind != PairKind::Overlap {
        return Err(Error::Certificate(format!(
            "(ρ, σ) classified {:?} in A and {:?} in B",
            class_a.kind, class_b.kind
        )));
    }

    let (ja, _) = arc_axis_witness(ta, a, &g, &beta)?;
    let (jb, _) = arc_axis_witness(tb, b, &g, &beta)?;
    let j = common_exponent(ja.max(jb), |j| {
        let f = axis_product(&g, &beta, j);
        Ok(crosses(ta, a, &f)? && crosses(tb, b, &f)?)
    })?;
    let (ka, _) = arc_axis_witness(ta, a, &alpha, &h)?;
    let (kb, _) = arc_axis_witness(tb, &br, &alpha, &h)?;
    let k = common_exponent(ka.max(kb), |k| {
        let f = axis_product(&alpha, &h, k);
        Ok(crosses(ta, a, &f)? && crosses(tb, &br, &f)?)
    })?;
    let c = axis_product(&g, &beta, j);
    let gamma = axis_product(&alpha, &h, k);
    let clash_a = classify_pair(ta, &c, &gamma)?;
    let clash_b = classify_pair(tb, &c, &gamma)?;
    if clash_a.orientation() != Orientation::Agree || clash_b.orientation() != Orientation::Oppose {
        return Err(Error::Certificate(format!(
            "(c, γ) orientations {:?} in A and {:?} in B",
            clash_a.orientation(),
            clash_b.orientation()
        )));
    }
    Ok(RectanglePairs {
        rho,
        sigma,
        n,
        m,
        class_a,
        class_b,
        c,
        gamma,
        j,
        k,
        clash_a,
        clash_b,
    })
}

/// From `(g, h) ∈ D^A ∩ O^B`: `a` is the last edge of the bridge from `C_h`
/// to `C_g` in `A`, `b` the first edge of the shared arc of the axes in `B`
/// oriented along `g`; the witnesses are `g^{±1}` and `h^{±1}`.
pub fn rectangle_from_pair<S: Scalar>(
    ta: &MarkedGraph<S>,
    tb: &MarkedGraph<S>,
    g: &Word,
    h: &Word,
) -> Result<RectangleCertificate> {
    same_group(ta, tb)?;
    let ca = classify_pair(ta, g, h)?;
    let cb = classify_pair(tb, g, h)?;
    if ca.kind != PairKind::Disjoint || cb.kind != PairKind::Overlap {
        return Err(Error::Precondition(format!(
            "need a pair disjoint in A and overlapping in B, got {:?} and {:?}",
            ca.kind, cb.kind
        )));
    }
    let AxisRelation::Disjoint { bridge, from, .. } = ta.relate(g, h)? else {
        return Err(Error::Domain("axes in A are not disjoint".into()));
    };
    let a = ta.edge_lift(from.anchor(), bridge[0])?.reversed();
    let AxisRelation::Overlap {
        length: Some(_),
        agree,
        from,
        arc,
    } = tb.relate(g, h)?
    else {
        return Err(Error::Domain("axes in B do not share a bounded arc".into()));
    };
    let b = tb.edge_lift(from.anchor(), arc[0])?;
    let (hf, hb) = if agree {
        (h.clone(), h.inverse())
    } else {
        (h.inverse(), h.clone())
    };
    let rect = RectangleCertificate {
        a,
        b,
        witnesses: [g.clone(), hf, g.inverse(), hb],
    };
    rect.verify(ta, tb)?;
    Ok(rect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgraph::presets::{barbell, rose};
    use crate::words::Alphabet;
    use crate::Rational;

    fn twisted() -> (MarkedGraph<Rational>, MarkedGraph<Rational>) {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let t = r
            .precompose(&[al.parse("a b a").unwrap(), al.parse("a b").unwrap()])
            .unwrap();
        (r, t)
    }

    #[test]
    fn self_search_finds_nothing() {
        let (r, _) = twisted();
        let res = rectangle_search(&r, &r, SearchBudget::new(4, 2).unwrap()).unwrap();
        assert!(matches!(res, RectangleSearch::NotFoundUpToBudget { .. }));
        let bb = barbell::<Rational>();
        let res = rectangle_search(&bb, &r, SearchBudget::new(4, 2).unwrap()).unwrap();
        assert!(matches!(res, RectangleSearch::NotFoundUpToBudget { .. }));
    }

    #[test]
    fn twisted_rose_rectangle_round_trip() {
        let (r, t) = twisted();
        let RectangleSearch::Found(rect) =
            rectangle_search(&r, &t, SearchBudget::new(6, 4).unwrap()).unwrap()
        else {
            panic!("no rectangle");
        };
        rect.verify(&r, &t).unwrap();
        let pairs = certificate_from_rectangle(&r, &t, &rect).unwrap();
        let back = rectangle_from_pair(&r, &t, &pairs.rho, &pairs.sigma).unwrap();
        let again = certificate_from_rectangle(&r, &t, &back).unwrap();
        assert_eq!(again.class_a.kind, PairKind::Disjoint);
        assert_eq!(again.class_b.kind, PairKind::Overlap);

        let mut bad = rect.clone();
        bad.witnesses[0] = bad.witnesses[3].clone();
        assert!(bad.verify(&r, &t).is_err());
        assert!(certificate_from_rectangle(&r, &t, &bad).is_err());
    }

    #[test]
    fn pair_to_rectangle() {
        let (r, t) = twisted();
        let found = crate::lfcore::find_first_pair(2, 4, |g, h| {
            let ka = classify_pair(&r, g, h).ok()?.kind;
            let kb = classify_pair(&t, g, h).ok()?.kind;
            match (ka, kb) {
                (PairKind::Disjoint, PairKind::Overlap) => Some(true),
                (PairKind::Overlap, PairKind::Disjoint) => Some(false),
                _ => None,
            }
        });
        let (g, h, forward) = found.expect("a combinatorial witness among short words");
        let (ta, tb) = if forward { (&r, &t) } else { (&t, &r) };
        let rect = rectangle_from_pair(ta, tb, &g, &h).unwrap();
        rect.verify(ta, tb).unwrap();
        let pairs = certificate_from_rectangle(ta, tb, &rect).unwrap();
        assert_eq!(pairs.class_a.kind, PairKind::Disjoint);
        assert_eq!(pairs.class_b.kind, PairKind::Overlap);
        assert!(rectangle_from_pair(tb, ta, &g, &h).is_err());
        let (a, b) = (Word::generator(0), Word::generator(1));
        assert!(rectangle_from_pair(&r, &r, &a, &b).is_err());
    }
}
