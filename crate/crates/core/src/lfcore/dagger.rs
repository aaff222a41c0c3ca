use rayon::prelude::*;

use super::goodpair::{GoodPairCertificate, SimultaneousGoodPair};
use super::oracle::{sum_oracle, LengthOracle, Provenance};
use crate::error::Result;
use crate::scalar::{max_of, Scalar};
use crate::words::{Alphabet, Word};

/// Based length function at the common point of the axes of `g`, `h` and
/// `gh⁻¹`, computed from translation lengths alone:
/// `L(k) = max d(C_x, k⁻¹·C_y)` over `x, y ∈ {g, h, gh⁻¹}`.
pub struct DaggerOracle<O, S> {
    inner: O,
    g: Word,
    h: Word,
    axes: [(Word, S); 3],
}

impl<S: Scalar, O: LengthOracle<S>> DaggerOracle<O, S> {
    /// Fails unless `gp` verifies against `inner`.
    pub fn new(inner: O, gp: &GoodPairCertificate<S>) -> Result<Self> {
        gp.verify(&inner)?;
        let x3 = gp.g.concat(&gp.h.inverse());
        let l3 = inner.eval(&x3);
        let axes = [
            (gp.g.clone(), gp.l_g.clone()),
            (gp.h.clone(), gp.l_h.clone()),
            (x3, l3),
        ];
        Ok(DaggerOracle {
            inner,
            g: gp.g.clone(),
            h: gp.h.clone(),
            axes,
        })
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<S: Scalar, O: LengthOracle<S>> LengthOracle<S> for DaggerOracle<O, S> {
    fn eval(&self, k: &Word) -> S {
        let ki = k.inverse();
        let mut best = S::zero();
        for (x, lx) in &self.axes {
            for (y, ly) in &self.axes {
                let conj = ki.concat(y).concat(k);
                let v = self.inner.eval(&x.concat(&conj)) - lx.clone() - ly.clone();
                best = max_of(best, v);
            }
        }
        best.half()
    }

    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn provenance(&self) -> Provenance {
        let a = self.inner.alphabet();
        Provenance::DerivedBased {
            inner: Box::new(self.inner.provenance()),
            g: a.format(&self.g),
            h: a.format(&self.h),
        }
    }
}

pub fn based_length_dagger<S: Scalar, O: LengthOracle<S>>(
    o: O,
    gp: &GoodPairCertificate<S>,
    k: &Word,
) -> Result<S> {
    let d = DaggerOracle::new(o, gp)?;
    d.checked_eval(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedSumViolation<S> {
    pub k: Word,
    pub sum: S,
    pub left: S,
    pub right: S,
}

#[derive(Clone, Debug)]
pub struct BasedSumReport<S> {
    pub checked: usize,
    pub violations: Vec<BasedSumViolation<S>>,
}

impl<S> BasedSumReport<S> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `P(k) = L(k) + M(k)` for every `k` in `sample`, where the three
/// based oracles sit at the good pair `gp` for `ℓ + m`, `ℓ` and `m`.
pub fn based_sum_identity<S, L, M>(
    l: &L,
    m: &M,
    gp: &SimultaneousGoodPair<S>,
    sample: &[Word],
) -> Result<BasedSumReport<S>>
where
    S: Scalar,
    L: LengthOracle<S>,
    M: LengthOracle<S>,
{
    let sum = sum_oracle(l, m)?;
    let pl = DaggerOracle::new(l, &gp.for_l)?;
    let pm = DaggerOracle::new(m, &gp.for_m)?;
    let ps = DaggerOracle::new(sum, &gp.for_sum)?;
    for k in sample {
        l.alphabet().check(k)?;
    }
    let violations: Vec<BasedSumViolation<S>> = sample
        .par_iter()
        .filter_map(|k| {
            let (a, b, s) = (pl.eval(k), pm.eval(k), ps.eval(k));
            (s != a.clone() + b.clone()).then(|| BasedSumViolation {
                k: k.clone(),
                sum: s,
                left: a,
                right: b,
            })
        })
        .collect();
    Ok(BasedSumReport {
        checked: sample.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfcore::goodpair::simultaneous_good_pair;
    use crate::mgraph::presets::{barbell, rose};
    use crate::mgraph::TreePoint;
    use crate::words::enumerate_words;
    use crate::Rational;

    #[test]
    fn identity_and_symmetry() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let gp = GoodPairCertificate::evaluate(&r, &al.parse("a a b").unwrap(), &al.parse("a a b'").unwrap())
            .unwrap();
        let d = DaggerOracle::new(&r, &gp).unwrap();
        assert_eq!(d.eval(&Word::identity()), Rational::from_integer(0));
        for k in enumerate_words(2, 3) {
            assert_eq!(d.eval(&k), d.eval(&k.inverse()));
            assert!(d.eval(&k) >= r.eval(&k));
        }
        let mut bad = gp.clone();
        bad.l_g = Rational::from_integer(5);
        assert!(based_length_dagger(&r, &bad, &Word::identity()).is_err());
    }

    #[test]
    fn matches_cover_at_triple_point() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let g = al.parse("a a b").unwrap();
        let h = al.parse("a a b'").unwrap();
        let gp = GoodPairCertificate::evaluate(&r, &g, &h).unwrap();
        let p = r.common_point(&[g.clone(), h.clone(), g.concat(&h.inverse())]).unwrap().unwrap();
        let d = DaggerOracle::new(&r, &gp).unwrap();
        for k in enumerate_words(2, 3) {
            assert_eq!(d.eval(&k), r.based_length(&p, &k), "{}", al.format(&k));
        }
        assert_ne!(p, TreePoint::base());
    }

    #[test]
    fn sum_identity_on_compatible_pair() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let bb = barbell::<Rational>();
        let gp = simultaneous_good_pair(&bb, &r, 4).unwrap().unwrap();
        let sample: Vec<Word> = enumerate_words(2, 3).collect();
        let rep = based_sum_identity(&bb, &r, &gp, &sample).unwrap();
        assert!(rep.holds(), "{:?}", rep.violations.first());
        let same = simultaneous_good_pair(&r, &r, 3).unwrap().unwrap();
        assert!(based_sum_identity(&r, &r, &same, &sample).unwrap().holds());
    }
}
