//! JSON certificates and their re-verification from the raw tree inputs.
//!
//! Words are stored in the alphabet's text syntax, edges in the graph's path
//! syntax and all numbers as `p/q` strings, so a certificate can be read and
//! checked by hand.

use serde::{Deserialize, Serialize};

use crate::corerect::{RectangleCertificate, RectanglePairs};
use crate::error::{Error, Result};
use crate::io::TreeInput;
use crate::lfcore::{
    classify_pair, sum_oracle, CompatVerdict, GoodPairCertificate, LengthOracle, Orientation,
    PairClass, PairKind, Provenance, SimultaneousGoodPair,
};
use crate::mgraph::{EdgeLift, MarkedGraph};
use crate::scalar::Scalar;
use crate::words::{Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairValues {
    pub l_g: String,
    pub l_h: String,
    pub l_gh: String,
    pub l_gh_inv: String,
}

impl PairValues {
    fn of<S: Scalar>(l_g: &S, l_h: &S, l_gh: &S, l_gh_inv: &S) -> Self {
        PairValues {
            l_g: l_g.to_fraction(),
            l_h: l_h.to_fraction(),
            l_gh: l_gh.to_fraction(),
            l_gh_inv: l_gh_inv.to_fraction(),
        }
    }

    fn parse<S: Scalar>(&self) -> Result<[S; 4]> {
        let p = |name: &str, s: &str| {
            S::parse_fraction(s)
                .ok_or_else(|| Error::Certificate(format!("{name} = `{s}` is not a fraction")))
        };
        Ok([
            p("l_g", &self.l_g)?,
            p("l_h", &self.l_h)?,
            p("l_gh", &self.l_gh)?,
            p("l_gh_inv", &self.l_gh_inv)?,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodPairDoc {
    pub g: String,
    pub h: String,
    pub values: PairValues,
    pub lower_slack: String,
    pub upper_slack: String,
}

impl GoodPairDoc {
    pub fn from_certificate<S: Scalar>(al: &Alphabet, c: &GoodPairCertificate<S>) -> Self {
        GoodPairDoc {
            g: al.format(&c.g),
            h: al.format(&c.h),
            values: PairValues::of(&c.l_g, &c.l_h, &c.l_gh, &c.l_gh_inv),
            lower_slack: c.lower_slack.to_fraction(),
            upper_slack: c.upper_slack.to_fraction(),
        }
    }

    pub fn to_certificate<S: Scalar>(&self, al: &Alphabet, provenance: Provenance) -> Result<GoodPairCertificate<S>> {
        let [l_g, l_h, l_gh, l_gh_inv] = self.values.parse()?;
        let slack = |s: &str| {
            S::parse_fraction(s).ok_or_else(|| Error::Certificate(format!("`{s}` is not a fraction")))
        };
        Ok(GoodPairCertificate {
            provenance,
            g: al.parse(&self.g)?,
            h: al.parse(&self.h)?,
            l_g,
            l_h,
            l_gh,
            l_gh_inv,
            lower_slack: slack(&self.lower_slack)?,
            upper_slack: slack(&self.upper_slack)?,
            assumptions: Vec::new(),
        })
    }

    fn verify<S: Scalar, O: LengthOracle<S> + ?Sized>(&self, o: &O) -> Result<()> {
        let c = self.to_certificate::<S>(o.alphabet(), o.provenance())?;
        c.check_inequalities()?;
        c.verify(o)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub kind: PairKind,
    pub values: PairValues,
}

impl ClassDoc {
    fn of<S: Scalar>(c: &PairClass<S>) -> Self {
        ClassDoc {
            kind: c.kind,
            values: PairValues::of(&c.l_g, &c.l_h, &c.l_gh, &c.l_gh_inv),
        }
    }

    fn check<S: Scalar, O: LengthOracle<S> + ?Sized>(&self, o: &O, g: &Word, h: &Word, tree: &str) -> Result<PairClass<S>> {
        let fresh = classify_pair(o, g, h)?;
        let stored: [S; 4] = self.values.parse()?;
        let computed = [&fresh.l_g, &fresh.l_h, &fresh.l_gh, &fresh.l_gh_inv];
        let names = ["ℓ(g)", "ℓ(h)", "ℓ(gh)", "ℓ(gh⁻¹)"];
        for ((n, s), c) in names.iter().zip(&stored).zip(computed) {
            if s != c {
                return Err(Error::Certificate(format!(
                    "tree {tree}: stored {n} = {} but the tree gives {}",
                    s.to_fraction(),
                    c.to_fraction()
                )));
            }
        }
        if fresh.kind != self.kind {
            return Err(Error::Certificate(format!(
                "tree {tree}: pair is {:?}, certificate says {:?}",
                fresh.kind, self.kind
            )));
        }
        Ok(fresh)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairWitnessKind {
    /// Overlap for one tree, disjoint for the other.
    Combinatorics,
    /// Overlap for both with opposite orientations.
    Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitnessDoc {
    pub witness: PairWitnessKind,
    pub g: String,
    pub h: String,
    pub first: ClassDoc,
    pub second: ClassDoc,
}

impl PairWitnessDoc {
    pub fn from_verdict<S: Scalar>(al: &Alphabet, v: &CompatVerdict<S>) -> Option<Self> {
        let (witness, g, h, l, m) = match v {
            CompatVerdict::IncompatibleCombinatorics { g, h, class_l, class_m } => {
                (PairWitnessKind::Combinatorics, g, h, class_l, class_m)
            }
            CompatVerdict::IncoherentOrientation { g, h, class_l, class_m } => {
                (PairWitnessKind::Orientation, g, h, class_l, class_m)
            }
            CompatVerdict::CompatibleUpToBound { .. } => return None,
        };
        Some(PairWitnessDoc {
            witness,
            g: al.format(g),
            h: al.format(h),
            first: ClassDoc::of(l),
            second: ClassDoc::of(m),
        })
    }

    fn verify<S, L, M>(&self, l: &L, m: &M) -> Result<()>
    where
        S: Scalar,
        L: LengthOracle<S> + ?Sized,
        M: LengthOracle<S> + ?Sized,
    {
        let al = l.alphabet();
        let (g, h) = (al.parse(&self.g)?, al.parse(&self.h)?);
        let cl = self.first.check(l, &g, &h, "1")?;
        let cm = self.second.check(m, &g, &h, "2")?;
        use PairKind::{Disjoint, Overlap};
        let ok = match self.witness {
            PairWitnessKind::Combinatorics => {
                matches!((cl.kind, cm.kind), (Overlap, Disjoint) | (Disjoint, Overlap))
            }
            PairWitnessKind::Orientation => {
                cl.kind == Overlap && cm.kind == Overlap && cl.orientation() != cm.orientation()
            }
        };
        if !ok {
            return Err(Error::Certificate(format!(
                "({}, {}) is not a {:?} witness: {:?} / {:?}",
                self.g, self.h, self.witness, cl.kind, cm.kind
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDoc {
    /// Tight edge path from the base vertex.
    pub anchor: String,
    /// Oriented edge leaving the end of `anchor`, `~` for reversed.
    pub edge: String,
}

impl LiftDoc {
    fn of<S: Scalar>(t: &MarkedGraph<S>, e: &EdgeLift) -> Self {
        LiftDoc {
            anchor: t.graph().format_path(&e.anchor),
            edge: t.graph().format_path(&[e.edge]),
        }
    }

    fn lift<S: Scalar>(&self, t: &MarkedGraph<S>) -> Result<EdgeLift> {
        let anchor = t.graph().parse_path(&self.anchor)?;
        let edge = match t.graph().parse_path(&self.edge)?.as_slice() {
            [e] => *e,
            _ => return Err(Error::Certificate(format!("`{}` is not a single edge", self.edge))),
        };
        t.edge_lift(&anchor, edge)
    }
}

/// The four witnesses are in the corner order `(a, b)`, `(ā, b)`, `(a, b̄)`,
/// `(ā, b̄)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleDoc {
    pub a: LiftDoc,
    pub b: LiftDoc,
    pub witnesses: [String; 4],
}

impl RectangleDoc {
    pub fn of<S: Scalar>(ta: &MarkedGraph<S>, tb: &MarkedGraph<S>, r: &RectangleCertificate) -> Self {
        RectangleDoc {
            a: LiftDoc::of(ta, &r.a),
            b: LiftDoc::of(tb, &r.b),
            witnesses: r.witnesses.clone().map(|w| ta.alphabet().format(&w)),
        }
    }

    pub fn to_rectangle<S: Scalar>(&self, ta: &MarkedGraph<S>, tb: &MarkedGraph<S>) -> Result<RectangleCertificate> {
        let al = ta.alphabet();
        let mut ws = Vec::with_capacity(4);
        for w in &self.witnesses {
            ws.push(al.parse(w)?);
        }
        Ok(RectangleCertificate {
            a: self.a.lift(ta)?,
            b: self.b.lift(tb)?,
            witnesses: ws.try_into().expect("four witnesses"),
        })
    }
}

/// Pairs derived from a rectangle: `(rho, sigma)` disjoint in the first tree
/// and overlapping in the second; `(c, gamma)` overlapping in both with
/// opposite orientations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedPairsDoc {
    pub rho: String,
    pub sigma: String,
    pub c: String,
    pub gamma: String,
}

impl DerivedPairsDoc {
    pub fn of<S: Scalar>(al: &Alphabet, p: &RectanglePairs<S>) -> Self {
        DerivedPairsDoc {
            rho: al.format(&p.rho),
            sigma: al.format(&p.sigma),
            c: al.format(&p.c),
            gamma: al.format(&p.gamma),
        }
    }

    fn verify<S, L, M>(&self, l: &L, m: &M) -> Result<()>
    where
        S: Scalar,
        L: LengthOracle<S> + ?Sized,
        M: LengthOracle<S> + ?Sized,
    {
        let al = l.alphabet();
        let w = |s: &str| al.parse(s);
        let (rho, sigma) = (w(&self.rho)?, w(&self.sigma)?);
        let (kl, km) = (classify_pair(l, &rho, &sigma)?.kind, classify_pair(m, &rho, &sigma)?.kind);
        if (kl, km) != (PairKind::Disjoint, PairKind::Overlap) {
            return Err(Error::Certificate(format!("(rho, sigma) classified {kl:?} / {km:?}")));
        }
        let (c, gamma) = (w(&self.c)?, w(&self.gamma)?);
        let ol = classify_pair(l, &c, &gamma)?.orientation();
        let om = classify_pair(m, &c, &gamma)?.orientation();
        if (ol, om) != (Orientation::Agree, Orientation::Oppose) {
            return Err(Error::Certificate(format!("(c, gamma) orientations {ol:?} / {om:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A good pair for the single tree given.
    GoodPair {
        alphabet: Vec<String>,
        pair: GoodPairDoc,
    },
    /// One pair good for both trees and for their sum.
    SimultaneousGoodPair {
        alphabet: Vec<String>,
        first: GoodPairDoc,
        second: GoodPairDoc,
        sum: GoodPairDoc,
    },
    /// Evidence that two trees are incompatible. `pair` needs only length
    /// values; `rectangle` needs marked graphs.
    Incompatible {
        alphabet: Vec<String>,
        pair: Option<PairWitnessDoc>,
        rectangle: Option<RectangleDoc>,
        derived: Option<DerivedPairsDoc>,
    },
}

impl Certificate {
    pub fn good_pair<S: Scalar>(al: &Alphabet, c: &GoodPairCertificate<S>) -> Self {
        Certificate::GoodPair {
            alphabet: al.names().to_vec(),
            pair: GoodPairDoc::from_certificate(al, c),
        }
    }

    pub fn simultaneous<S: Scalar>(al: &Alphabet, gp: &SimultaneousGoodPair<S>) -> Self {
        Certificate::SimultaneousGoodPair {
            alphabet: al.names().to_vec(),
            first: GoodPairDoc::from_certificate(al, &gp.for_l),
            second: GoodPairDoc::from_certificate(al, &gp.for_m),
            sum: GoodPairDoc::from_certificate(al, &gp.for_sum),
        }
    }

    pub fn alphabet(&self) -> &[String] {
        match self {
            Certificate::GoodPair { alphabet, .. }
            | Certificate::SimultaneousGoodPair { alphabet, .. }
            | Certificate::Incompatible { alphabet, .. } => alphabet,
        }
    }

    pub fn trees_needed(&self) -> usize {
        match self {
            Certificate::GoodPair { .. } => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
    }

    /// Re-derives everything in the certificate from `trees`. Returns one line
    /// per check that passed.
    pub fn verify<S: Scalar>(&self, trees: &[TreeInput<S>]) -> Result<Vec<String>> {
        if trees.len() != self.trees_needed() {
            return Err(Error::Precondition(format!(
                "certificate needs {} tree(s), got {}",
                self.trees_needed(),
                trees.len()
            )));
        }
        for t in trees {
            if t.alphabet().names() != self.alphabet() {
                return Err(Error::AlphabetMismatch(format!(
                    "certificate uses {:?}, tree uses {:?}",
                    self.alphabet(),
                    t.alphabet().names()
                )));
            }
        }
        let mut done = Vec::new();
        match self {
            Certificate::GoodPair { pair, .. } => {
                pair.verify(&trees[0])?;
                done.push(format!("good pair ({}, {})", pair.g, pair.h));
            }
            Certificate::SimultaneousGoodPair { first, second, sum, .. } => {
                if (&first.g, &first.h) != (&second.g, &second.h) || (&first.g, &first.h) != (&sum.g, &sum.h) {
                    return Err(Error::Certificate("the three pairs differ".into()));
                }
                first.verify(&trees[0])?;
                second.verify(&trees[1])?;
                sum.verify(&sum_oracle(&trees[0], &trees[1])?)?;
                done.push(format!("good pair ({}, {}) for both trees and the sum", first.g, first.h));
            }
            Certificate::Incompatible { pair, rectangle, derived, .. } => {
                if pair.is_none() && rectangle.is_none() && derived.is_none() {
                    return Err(Error::Certificate("no evidence given".into()));
                }
                if let Some(p) = pair {
                    p.verify(&trees[0], &trees[1])?;
                    done.push(format!("{:?} pair ({}, {})", p.witness, p.g, p.h).to_lowercase());
                }
                if let Some(r) = rectangle {
                    let (Some(ta), Some(tb)) = (trees[0].as_marked(), trees[1].as_marked()) else {
                        return Err(Error::Precondition("rectangles need marked graphs".into()));
                    };
                    r.to_rectangle(ta, tb)?.verify(ta, tb)?;
                    done.push("rectangle horizons".into());
                }
                if let Some(d) = derived {
                    d.verify(&trees[0], &trees[1])?;
                    done.push("pairs derived from the rectangle".into());
                }
            }
        }
        Ok(done)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corerect::{certificate_from_rectangle, rectangle_search, RectangleSearch, SearchBudget};
    use crate::lfcore::{compatible_on_words, power_good_pair};
    use crate::mgraph::presets::rose;
    use crate::Rational;

    fn trees() -> (MarkedGraph<Rational>, MarkedGraph<Rational>) {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let t = r.precompose(&[al.parse("a b a").unwrap(), al.parse("a b").unwrap()]).unwrap();
        (r, t)
    }

    #[test]
    fn good_pair_round_trip_and_tamper() {
        let (r, _) = trees();
        let al = r.alphabet().clone();
        let pg = power_good_pair(&r, &al.parse("a b").unwrap(), &al.parse("b").unwrap()).unwrap();
        let cert = Certificate::good_pair(&al, &pg.certificate);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        let t = [TreeInput::Marked(r.clone())];
        back.verify(&t).unwrap();
        let Certificate::GoodPair { alphabet, mut pair } = cert else { unreachable!() };
        pair.values.l_gh_inv = "100/1".into();
        let bad = Certificate::GoodPair { alphabet, pair };
        let err = bad.verify(&t).unwrap_err().to_string();
        assert!(err.contains("0 < ℓ(g)+ℓ(h)−ℓ(gh⁻¹) fails") || err.contains("slacks"), "{err}");
    }

    #[test]
    fn incompatibility_round_trip() {
        let (r, t) = trees();
        let al = r.alphabet().clone();
        let v = compatible_on_words(&r, &t, 5).unwrap();
        let RectangleSearch::Found(rect) = rectangle_search(&r, &t, SearchBudget::new(6, 4).unwrap()).unwrap() else {
            panic!("no rectangle")
        };
        let pairs = certificate_from_rectangle(&r, &t, &rect).unwrap();
        let cert = Certificate::Incompatible {
            alphabet: al.names().to_vec(),
            pair: PairWitnessDoc::from_verdict(&al, &v),
            rectangle: Some(RectangleDoc::of(&r, &t, &rect)),
            derived: Some(DerivedPairsDoc::of(&al, &pairs)),
        };
        let trees = [TreeInput::Marked(r.clone()), TreeInput::Marked(t.clone())];
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back.verify(&trees).unwrap().len(), 3);
        let swapped = [TreeInput::Marked(t), TreeInput::Marked(r)];
        assert!(back.verify(&swapped).is_err());
        assert!(back.verify(&trees[..1]).is_err());
    }
}
