use super::classify::{classify_pair, PairKind, Orientation};
use super::oracle::{sum_oracle, LengthOracle, Provenance};
use super::pairs::find_first_pair;
use crate::error::{Error, Result};
use crate::scalar::{from_usize, min_of, Scalar};
use crate::words::Word;

/// Largest word length the escalation loops will build.
const MAX_ESCALATED_LEN: usize = 1 << 14;
const MAX_ESCALATIONS: u32 = 32;

/// A pair `(g, h)` with `0 < ℓ(g)+ℓ(h)−ℓ(gh⁻¹) < 2·min{ℓ(g), ℓ(h)}`, together
/// with the values that certify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPairCertificate<S> {
    pub provenance: Provenance,
    pub g: Word,
    pub h: Word,
    pub l_g: S,
    pub l_h: S,
    pub l_gh: S,
    pub l_gh_inv: S,
    /// `ℓ(g)+ℓ(h)−ℓ(gh⁻¹)`; must be positive.
    pub lower_slack: S,
    /// `2·min{ℓ(g), ℓ(h)} − lower_slack`; must be positive.
    pub upper_slack: S,
    /// Hypotheses the numbers cannot confirm.
    pub assumptions: Vec<String>,
}

fn two<S: Scalar>() -> S {
    S::one() + S::one()
}

impl<S: Scalar> GoodPairCertificate<S> {
    pub fn from_values(
        provenance: Provenance,
        g: Word,
        h: Word,
        l_g: S,
        l_h: S,
        l_gh: S,
        l_gh_inv: S,
    ) -> Self {
        let lower_slack = l_g.clone() + l_h.clone() - l_gh_inv.clone();
        let upper_slack = min_of(l_g.clone(), l_h.clone()) * two() - lower_slack.clone();
        GoodPairCertificate {
            provenance,
            g,
            h,
            l_g,
            l_h,
            l_gh,
            l_gh_inv,
            lower_slack,
            upper_slack,
            assumptions: Vec::new(),
        }
    }

    /// Evaluates the pair; the result may fail [`Self::check_inequalities`].
    pub fn measure<O: LengthOracle<S> + ?Sized>(o: &O, g: &Word, h: &Word) -> Result<Self> {
        o.alphabet().check(g)?;
        o.alphabet().check(h)?;
        Ok(Self::from_values(
            o.provenance(),
            g.clone(),
            h.clone(),
            o.eval(g),
            o.eval(h),
            o.eval(&g.concat(h)),
            o.eval(&g.concat(&h.inverse())),
        ))
    }

    /// A certificate for `(g, h)`, or an error naming the failed inequality.
    pub fn evaluate<O: LengthOracle<S> + ?Sized>(o: &O, g: &Word, h: &Word) -> Result<Self> {
        let c = Self::measure(o, g, h)?;
        c.check_inequalities()?;
        Ok(c)
    }

    pub fn is_good(&self) -> bool {
        self.check_inequalities().is_ok()
    }

    /// Checks the stored numbers alone.
    pub fn check_inequalities(&self) -> Result<()> {
        let f = |x: &S| x.to_fraction();
        let lower = self.l_g.clone() + self.l_h.clone() - self.l_gh_inv.clone();
        let upper = min_of(self.l_g.clone(), self.l_h.clone()) * two();
        if !(lower > S::zero()) {
            return Err(Error::Certificate(format!(
                "0 < ℓ(g)+ℓ(h)−ℓ(gh⁻¹) fails: {} + {} − {} = {}",
                f(&self.l_g),
                f(&self.l_h),
                f(&self.l_gh_inv),
                f(&lower)
            )));
        }
        if !(lower < upper) {
            return Err(Error::Certificate(format!(
                "ℓ(g)+ℓ(h)−ℓ(gh⁻¹) < 2·min{{ℓ(g), ℓ(h)}} fails: {} ≥ {}",
                f(&lower),
                f(&upper)
            )));
        }
        if lower != self.lower_slack
            || upper - lower != self.upper_slack
        {
            return Err(Error::Certificate(format!(
                "slacks {} and {} do not match the stored lengths",
                f(&self.lower_slack),
                f(&self.upper_slack)
            )));
        }
        Ok(())
    }

    /// Re-evaluates every stored value with `o` and rechecks the inequalities.
    pub fn verify<O: LengthOracle<S> + ?Sized>(&self, o: &O) -> Result<()> {
        let fresh = Self::measure(o, &self.g, &self.h)?;
        let names = ["ℓ(g)", "ℓ(h)", "ℓ(gh)", "ℓ(gh⁻¹)"];
        let stored = [&self.l_g, &self.l_h, &self.l_gh, &self.l_gh_inv];
        let computed = [&fresh.l_g, &fresh.l_h, &fresh.l_gh, &fresh.l_gh_inv];
        for ((n, s), c) in names.iter().zip(stored).zip(computed) {
            if s != c {
                return Err(Error::Certificate(format!(
                    "stored {n} = {} but the oracle gives {}",
                    s.to_fraction(),
                    c.to_fraction()
                )));
            }
        }
        self.check_inequalities()
    }

    /// Half the lower slack: the overlap length of the two axes.
    pub fn overlap_length(&self) -> S {
        self.lower_slack.half()
    }

    pub fn with_assumption(mut self, a: impl Into<String>) -> Self {
        self.assumptions.push(a.into());
        self
    }
}

/// Exponents that turn an agreeing overlapping pair into a good pair.
#[derive(Clone, Debug)]
pub struct PowerGoodPair<S> {
    pub a: u64,
    pub b: u64,
    pub certificate: GoodPairCertificate<S>,
}

/// Starts from `A = ⌈N/ℓ(g)⌉`, `B = ⌈N/ℓ(h)⌉` with `N` the overlap length and
/// doubles the exponent of the shorter power until `(gᴬ, hᴮ)` is good.
pub fn power_good_pair<S: Scalar, O: LengthOracle<S> + ?Sized>(
    o: &O,
    g: &Word,
    h: &Word,
) -> Result<PowerGoodPair<S>> {
    let c = classify_pair(o, g, h)?;
    if c.kind != PairKind::Overlap {
        return Err(Error::Precondition(format!("pair is {:?}, not overlapping", c.kind)));
    }
    if c.orientation() != Orientation::Agree {
        return Err(Error::Precondition("axes overlap with opposite orientations".into()));
    }
    let n = c.overlap_length().expect("overlapping");
    let start = |l: &S| (n.clone() / l.clone()).ceil_u64().unwrap_or(1).max(1);
    let (mut a, mut b) = (start(&c.l_g), start(&c.l_h));
    for _ in 0..=MAX_ESCALATIONS {
        if (a as usize).saturating_mul(g.len()) > MAX_ESCALATED_LEN
            || (b as usize).saturating_mul(h.len()) > MAX_ESCALATED_LEN
        {
            break;
        }
        let cert = GoodPairCertificate::measure(o, &g.pow(a as i64), &h.pow(b as i64))?;
        if cert.is_good() {
            return Ok(PowerGoodPair {
                a,
                b,
                certificate: cert,
            });
        }
        let la = c.l_g.clone() * from_usize::<S>(a as usize);
        let lb = c.l_h.clone() * from_usize::<S>(b as usize);
        if lb < la {
            b *= 2;
        } else {
            a *= 2;
        }
    }
    Err(Error::EscalationExhausted {
        steps: MAX_ESCALATIONS,
        what: "powers of the pair never became good; the overlap may be unbounded".into(),
    })
}

pub const INDEPENDENCE_ASSUMPTION: &str =
    "g and h are independent with the orientation hypothesis on their axes (not checked)";

/// Certifies `(gh, gh⁻¹)`, raising both to powers if the plain pair fails.
pub fn good_pair_from_independent<S: Scalar, O: LengthOracle<S> + ?Sized>(
    o: &O,
    g: &Word,
    h: &Word,
) -> Result<GoodPairCertificate<S>> {
    let (lg, lh) = (o.checked_eval(g)?, o.checked_eval(h)?);
    if !(lh < lg) {
        return Err(Error::Precondition(format!(
            "need ℓ(h) < ℓ(g), got ℓ(g) = {} and ℓ(h) = {}",
            lg.to_fraction(),
            lh.to_fraction()
        )));
    }
    let x = g.concat(h);
    let y = g.concat(&h.inverse());
    let plain = GoodPairCertificate::measure(o, &x, &y)?;
    if plain.is_good() {
        return Ok(plain.with_assumption(INDEPENDENCE_ASSUMPTION));
    }
    match power_good_pair(o, &x, &y) {
        Ok(p) => Ok(p.certificate.with_assumption(INDEPENDENCE_ASSUMPTION)),
        Err(e) => Err(Error::Precondition(format!(
            "independence hypothesis violated: (gh, gh⁻¹) cannot be made good ({e})"
        ))),
    }
}

pub fn is_good_pair<S: Scalar, O: LengthOracle<S> + ?Sized>(o: &O, g: &Word, h: &Word) -> bool {
    GoodPairCertificate::measure(o, g, h).is_ok_and(|c| c.is_good())
}

/// A pair that is good for `ℓ`, `m` and `ℓ + m` at once.
#[derive(Clone, Debug)]
pub struct SimultaneousGoodPair<S> {
    pub g: Word,
    pub h: Word,
    pub for_l: GoodPairCertificate<S>,
    pub for_m: GoodPairCertificate<S>,
    pub for_sum: GoodPairCertificate<S>,
}

impl<S: Scalar> SimultaneousGoodPair<S> {
    pub fn for_pair<L, M>(l: &L, m: &M, g: &Word, h: &Word) -> Result<Self>
    where
        L: LengthOracle<S> + ?Sized,
        M: LengthOracle<S> + ?Sized,
    {
        let sum = sum_oracle(l, m)?;
        Ok(SimultaneousGoodPair {
            g: g.clone(),
            h: h.clone(),
            for_l: GoodPairCertificate::evaluate(l, g, h)?,
            for_m: GoodPairCertificate::evaluate(m, g, h)?,
            for_sum: GoodPairCertificate::evaluate(&sum, g, h)?,
        })
    }
}

/// The first canonical pair of words of length `≤ bound` that is good for
/// `ℓ`, `m` and `ℓ + m`; `None` only speaks about that bound.
pub fn simultaneous_good_pair<S, L, M>(
    l: &L,
    m: &M,
    bound: usize,
) -> Result<Option<SimultaneousGoodPair<S>>>
where
    S: Scalar,
    L: LengthOracle<S> + ?Sized,
    M: LengthOracle<S> + ?Sized,
{
    let sum = sum_oracle(l, m)?;
    let hit = find_first_pair(l.alphabet().rank(), bound, |g, h| {
        (is_good_pair(l, g, h) && is_good_pair(m, g, h) && is_good_pair(&sum, g, h))
            .then_some(())
    });
    match hit {
        Some((g, h, ())) => SimultaneousGoodPair::for_pair(l, m, &g, &h).map(Some),
        None => Ok(None),
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
    fn certificate_checks() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let w = |s: &str| al.parse(s).unwrap();
        let c = GoodPairCertificate::evaluate(&r, &w("a a b"), &w("a a b'")).unwrap();
        assert_eq!((c.l_g, c.l_gh_inv), (q(3), q(2)));
        assert_eq!((c.lower_slack, c.upper_slack), (q(4), q(2)));
        assert_eq!(c.overlap_length(), q(2));
        c.verify(&r).unwrap();
        let mut bad = c.clone();
        bad.l_gh_inv = q(3);
        assert!(bad.verify(&r).is_err());
        assert!(GoodPairCertificate::evaluate(&r, &w("a b"), &w("b")).is_err());
    }

    #[test]
    fn powers() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let w = |s: &str| al.parse(s).unwrap();
        let p = power_good_pair(&r, &w("a b"), &w("b")).unwrap();
        assert_eq!((p.a, p.b), (1, 2));
        let p = power_good_pair(&r, &w("a a b"), &w("a a b'")).unwrap();
        assert_eq!((p.a, p.b), (1, 1));
        assert!(power_good_pair(&r, &w("a b"), &w("b'")).is_err());
        assert!(power_good_pair(&r, &w("a"), &w("b")).is_err());
        assert!(matches!(
            power_good_pair(&r, &w("a"), &w("a a")),
            Err(Error::EscalationExhausted { .. })
        ));
    }

    #[test]
    fn from_independent() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let w = |s: &str| al.parse(s).unwrap();
        let c = good_pair_from_independent(&r, &w("a a"), &w("b")).unwrap();
        assert_eq!((c.g.clone(), c.h.clone()), (w("a a b"), w("a a b'")));
        assert_eq!(c.assumptions.len(), 1);
        let bb = barbell::<Rational>();
        let c = good_pair_from_independent(&bb, &w("a b"), &w("a")).unwrap();
        c.verify(&bb).unwrap();
        assert_eq!(c.g, w("a b a"));
        assert_eq!(c.h, w("a b a'").pow(2));
        assert!(good_pair_from_independent(&r, &w("a"), &w("b")).is_err());
    }

    #[test]
    fn simultaneous() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let s = simultaneous_good_pair(&r, &r, 3).unwrap().unwrap();
        assert_eq!((s.g.clone(), s.h.clone()), (al.parse("a a").unwrap(), al.parse("a b").unwrap()));
        assert_eq!(s.for_sum.l_g, q(4));
        assert!(simultaneous_good_pair(&r, &r, 0).unwrap().is_none());
        let bb = barbell::<Rational>();
        let s = simultaneous_good_pair(&bb, &r, 4).unwrap().unwrap();
        s.for_l.verify(&bb).unwrap();
        s.for_m.verify(&r).unwrap();
    }
}
