//! End-to-end runs over loaded trees: the compatibility decision with both
//! certificate routes, and the refinement reconstruction.

use crate::cert::{Certificate, DerivedPairsDoc, PairWitnessDoc, RectangleDoc};
use crate::corerect::{
    certificate_from_rectangle, rectangle_from_pair, rectangle_search, subarc_spot_check,
    RectangleSearch, SearchBudget,
};
use crate::error::{Error, Result};
use crate::io::TreeInput;
use crate::lfcore::{
    compatible_on_words, simultaneous_good_pair, sum_oracle, CompatVerdict, DaggerOracle,
    LengthOracle, PairKind, SimultaneousGoodPair,
};
use crate::refine::{
    build_tree, displacement_check, orbit_metric, verify_refinement, DisplacementReport,
    FiniteTree, RefinementReport,
};
use crate::scalar::Scalar;
use crate::words::enumerate_words;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompatStatus {
    Incompatible,
    CompatibleUpToBound,
    /// The routes disagree: one produced evidence the other rejected.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct CompatOutcome<S> {
    pub status: CompatStatus,
    pub verdict: CompatVerdict<S>,
    /// `None` when a tree is not a marked graph.
    pub rectangle: Option<RectangleSearch>,
    pub certificate: Option<Certificate>,
    /// Checks performed, in order, one line each.
    pub log: Vec<String>,
}

/// Samples drawn by the subarc spot-check per tree.
pub const SPOT_CHECK_SAMPLES: usize = 64;

/// Pair scan over words up to `len_bound`; for marked graphs also the
/// rectangle search within `budget`, conversion between the two kinds of
/// evidence, and a seeded subarc spot-check.
pub fn compat<S: Scalar>(
    a: &TreeInput<S>,
    b: &TreeInput<S>,
    len_bound: usize,
    budget: SearchBudget,
    seed: u64,
) -> Result<CompatOutcome<S>> {
    let al = a.alphabet().clone();
    if &al != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", al.names(), b.alphabet().names())));
    }
    let mut log = Vec::new();
    let mut disagreement = false;
    let verdict = compatible_on_words(a, b, len_bound)?;
    let pair = PairWitnessDoc::from_verdict(&al, &verdict);
    match &verdict {
        CompatVerdict::CompatibleUpToBound { pairs_checked } => {
            log.push(format!("pair scan: no witness among {pairs_checked} pairs of words ≤ {len_bound}"))
        }
        v => {
            v.recheck(a, b)?;
            let (g, h) = v.witness().expect("witness");
            log.push(format!("pair scan: witness ({}, {}) rechecked", al.format(g), al.format(h)));
        }
    }

    let (mut rectangle_doc, mut derived, mut search) = (None, None, None);
    if let (Some(ta), Some(tb)) = (a.as_marked(), b.as_marked()) {
        for (name, t) in [("A", ta), ("B", tb)] {
            let n = subarc_spot_check(t, 2, 4, SPOT_CHECK_SAMPLES, seed)?;
            log.push(format!("subarc spot-check {name}: {n} samples agree"));
        }
        let found = rectangle_search(ta, tb, budget)?;
        match &found {
            RectangleSearch::Found(rect) => {
                rect.verify(ta, tb)?;
                log.push("rectangle search: rectangle found and rechecked".into());
                rectangle_doc = Some(RectangleDoc::of(ta, tb, rect));
                match certificate_from_rectangle(ta, tb, rect) {
                    Ok(p) => {
                        log.push(format!(
                            "rectangle to pairs: ({}, {}) disjoint/overlap, ({}, {}) orientation clash",
                            al.format(&p.rho),
                            al.format(&p.sigma),
                            al.format(&p.c),
                            al.format(&p.gamma)
                        ));
                        derived = Some(DerivedPairsDoc::of(&al, &p));
                    }
                    Err(e) => {
                        log.push(format!("rectangle to pairs failed: {e}"));
                        disagreement = true;
                    }
                }
            }
            RectangleSearch::NotFoundUpToBudget { .. } => log.push(format!(
                "rectangle search: none with words ≤ {} and anchors ≤ {}",
                budget.max_word_len, budget.max_anchor_len
            )),
        }
        if let CompatVerdict::IncompatibleCombinatorics { g, h, class_l, .. } = &verdict {
            if class_l.kind == PairKind::Disjoint {
                match rectangle_from_pair(ta, tb, g, h) {
                    Ok(rect) => {
                        log.push("pair to rectangle: rectangle built and rechecked".into());
                        if rectangle_doc.is_none() {
                            rectangle_doc = Some(RectangleDoc::of(ta, tb, &rect));
                        }
                    }
                    Err(e) => {
                        log.push(format!("pair to rectangle failed: {e}"));
                        disagreement = true;
                    }
                }
            } else {
                match rectangle_from_pair(tb, ta, g, h) {
                    Ok(_) => log.push("pair to rectangle (trees swapped): rectangle built and rechecked".into()),
                    Err(e) => {
                        log.push(format!("pair to rectangle failed: {e}"));
                        disagreement = true;
                    }
                }
            }
        }
        search = Some(found);
    } else {
        log.push("rectangle search: skipped, needs two marked graphs".into());
    }

    let evidence = pair.is_some() || rectangle_doc.is_some() || derived.is_some();
    let certificate = evidence.then(|| Certificate::Incompatible {
        alphabet: al.names().to_vec(),
        pair,
        rectangle: rectangle_doc,
        derived,
    });
    if let Some(c) = &certificate {
        c.verify(&[a.clone(), b.clone()])?;
        log.push("certificate: re-derived from the inputs".into());
    }
    let status = if disagreement {
        CompatStatus::Unknown
    } else if evidence {
        CompatStatus::Incompatible
    } else {
        CompatStatus::CompatibleUpToBound
    };
    Ok(CompatOutcome {
        status,
        verdict,
        rectangle: search,
        certificate,
        log,
    })
}

#[derive(Clone, Debug)]
pub struct RefineOutcome<S> {
    pub good_pair: SimultaneousGoodPair<S>,
    pub tree: FiniteTree<S>,
    pub refinement: RefinementReport,
    pub displacement: DisplacementReport<S>,
}

impl<S: Scalar> RefineOutcome<S> {
    pub fn passes(&self) -> bool {
        self.refinement.passes() && self.displacement.passes()
    }
}

/// Refuses with [`Error::Precondition`] when the pair scan finds a witness.
pub fn refine<S: Scalar>(
    a: &TreeInput<S>,
    b: &TreeInput<S>,
    len_bound: usize,
    sample_bound: usize,
    pair_bound: usize,
) -> Result<RefineOutcome<S>> {
    let verdict = compatible_on_words(a, b, len_bound)?;
    if let Some((g, h)) = verdict.witness() {
        let al = a.alphabet();
        return Err(Error::Precondition(format!(
            "trees are incompatible: witness ({}, {})",
            al.format(g),
            al.format(h)
        )));
    }
    let gp = simultaneous_good_pair(a, b, pair_bound)?.ok_or_else(|| {
        Error::Precondition(format!("no simultaneous good pair among words ≤ {pair_bound}"))
    })?;
    let sum = sum_oracle(a, b)?;
    let p = DaggerOracle::new(&sum, &gp.for_sum)?;
    let sample: Vec<_> = enumerate_words(a.alphabet().rank(), sample_bound).collect();
    let om = orbit_metric(&p, &sample)?;
    let tree = build_tree(&om)?;
    let refinement = verify_refinement(a, b, &gp, &tree)?;
    let displacement = displacement_check(&sum, &p, &sample)?;
    Ok(RefineOutcome {
        good_pair: gp,
        tree,
        refinement,
        displacement,
    })
}
