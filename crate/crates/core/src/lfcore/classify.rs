use serde::{Deserialize, Serialize};

use super::oracle::LengthOracle;
use crate::error::{Error, Result};
use crate::scalar::{max_of, min_of, Scalar};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `ℓ(gh) ≠ ℓ(gh⁻¹)` with both members hyperbolic.
    Overlap,
    /// `ℓ(gh) = ℓ(gh⁻¹) > ℓ(g) + ℓ(h)`.
    Disjoint,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Agree,
    Oppose,
    NotOverlap,
}

/// The four values that determine the class of a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass<S> {
    pub kind: PairKind,
    pub l_g: S,
    pub l_h: S,
    pub l_gh: S,
    pub l_gh_inv: S,
}

impl<S: Scalar> PairClass<S> {
    pub fn from_values(l_g: S, l_h: S, l_gh: S, l_gh_inv: S) -> Self {
        let hyperbolic = l_g.is_positive() && l_h.is_positive();
        let kind = if l_gh != l_gh_inv && hyperbolic {
            PairKind::Overlap
        } else if l_gh > l_g.clone() + l_h.clone() {
            PairKind::Disjoint
        } else {
            PairKind::Neither
        };
        PairClass {
            kind,
            l_g,
            l_h,
            l_gh,
            l_gh_inv,
        }
    }

    pub fn orientation(&self) -> Orientation {
        if self.kind != PairKind::Overlap {
            Orientation::NotOverlap
        } else if self.l_gh > self.l_gh_inv {
            Orientation::Agree
        } else if self.l_gh < self.l_gh_inv {
            Orientation::Oppose
        } else {
            Orientation::NotOverlap
        }
    }

    /// `(ℓ(g) + ℓ(h) − min{ℓ(gh), ℓ(gh⁻¹)}) / 2` for overlapping pairs.
    pub fn overlap_length(&self) -> Option<S> {
        (self.kind == PairKind::Overlap).then(|| {
            (self.l_g.clone() + self.l_h.clone()
                - min_of(self.l_gh.clone(), self.l_gh_inv.clone()))
            .half()
        })
    }

    /// `½ max{0, ℓ(gh) − ℓ(g) − ℓ(h)}`.
    pub fn char_distance(&self) -> S {
        max_of(
            S::zero(),
            self.l_gh.clone() - self.l_g.clone() - self.l_h.clone(),
        )
        .half()
    }

    /// Values scaled by a positive factor.
    pub fn scaled(&self, factor: &S) -> Self {
        let f = |x: &S| x.clone() * factor.clone();
        PairClass::from_values(f(&self.l_g), f(&self.l_h), f(&self.l_gh), f(&self.l_gh_inv))
    }
}

pub fn pair_values<S: Scalar, O: LengthOracle<S> + ?Sized>(
    o: &O,
    g: &Word,
    h: &Word,
) -> PairClass<S> {
    PairClass::from_values(
        o.eval(g),
        o.eval(h),
        o.eval(&g.concat(h)),
        o.eval(&g.concat(&h.inverse())),
    )
}

/// Classifies a pair of distinct elements. Fails if a non-disjoint pair
/// with an elliptic member has `max{ℓ(gh), ℓ(gh⁻¹)}` above the other length.
pub fn classify_pair<S: Scalar, O: LengthOracle<S> + ?Sized>(
    o: &O,
    g: &Word,
    h: &Word,
) -> Result<PairClass<S>> {
    o.alphabet().check(g)?;
    o.alphabet().check(h)?;
    if g == h {
        return Err(Error::Domain("pairs must consist of distinct elements".into()));
    }
    let c = pair_values(o, g, h);
    check_elliptic_rule(&c)?;
    Ok(c)
}

/// An elliptic member bounds `ℓ(gh)` and `ℓ(gh⁻¹)` by the other length
/// unless the pair is disjoint.
pub(crate) fn check_elliptic_rule<S: Scalar>(c: &PairClass<S>) -> Result<()> {
    if c.kind == PairKind::Disjoint {
        return Ok(());
    }
    for (zero, other) in [(&c.l_g, &c.l_h), (&c.l_h, &c.l_g)] {
        if zero.is_zero() && (c.l_gh > *other || c.l_gh_inv > *other) {
            return Err(Error::Domain(format!(
                "elliptic element in a non-disjoint pair with ℓ(gh) = {}, ℓ(gh⁻¹) = {} above the other length {}",
                c.l_gh.to_fraction(),
                c.l_gh_inv.to_fraction(),
                other.to_fraction()
            )));
        }
    }
    Ok(())
}

pub fn char_distance<S: Scalar, O: LengthOracle<S> + ?Sized>(o: &O, g: &Word, h: &Word) -> S {
    let v = o.eval(&g.concat(h)) - o.eval(g) - o.eval(h);
    max_of(S::zero(), v).half()
}

/// Orientation and, when overlapping, the overlap length.
pub fn overlap_orientation<S: Scalar, O: LengthOracle<S> + ?Sized>(
    o: &O,
    g: &Word,
    h: &Word,
) -> (Orientation, Option<S>) {
    let c = pair_values(o, g, h);
    (c.orientation(), c.overlap_length())
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
    fn examples() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let bb = barbell::<Rational>();
        let w = |s: &str| al.parse(s).unwrap();
        let c = classify_pair(&r, &w("a b"), &w("b")).unwrap();
        assert_eq!((c.kind, c.l_gh, c.l_gh_inv), (PairKind::Overlap, q(3), q(1)));
        assert_eq!(c.orientation(), Orientation::Agree);
        assert_eq!(c.overlap_length(), Some(q(1)));
        let c = classify_pair(&bb, &w("a"), &w("b")).unwrap();
        assert_eq!((c.kind, c.l_gh), (PairKind::Disjoint, q(4)));
        let c = classify_pair(&r, &w("a"), &w("b")).unwrap();
        assert_eq!(c.kind, PairKind::Neither);
        assert!(classify_pair(&r, &w("a"), &w("a")).is_err());

        assert_eq!(char_distance(&bb, &w("a"), &w("b")), q(1));
        assert_eq!(char_distance(&r, &w("a"), &w("b")), q(0));
        assert_eq!(char_distance(&r, &w("a"), &w("a")), q(0));

        assert_eq!(overlap_orientation(&r, &w("a b"), &w("b")).0, Orientation::Agree);
        assert_eq!(overlap_orientation(&r, &w("a b"), &w("b'")).0, Orientation::Oppose);
        assert_eq!(
            overlap_orientation(&r, &w("a"), &w("b")),
            (Orientation::NotOverlap, None)
        );
    }
}
