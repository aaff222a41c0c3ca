use std::fmt;

use rayon::prelude::*;

use super::goodpair::GoodPairCertificate;
use super::oracle::LengthOracle;
use super::pairs::pair_key;
use crate::error::{Error, Result};
use crate::scalar::{max_of, min_of, Scalar};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    NonNegativity,
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::NonNegativity,
        Axiom::I,
        Axiom::II,
        Axiom::III,
        Axiom::IV,
        Axiom::V,
        Axiom::VI,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::NonNegativity => "nonnegativity",
            Axiom::I => "I",
            Axiom::II => "II",
            Axiom::III => "III",
            Axiom::IV => "IV",
            Axiom::V => "V",
            Axiom::VI => "VI",
        };
        f.write_str(s)
    }
}

/// A failed instance: the words involved and the values that break the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation<S> {
    pub axiom: Axiom,
    pub words: Vec<Word>,
    pub values: Vec<S>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomVerdict {
    Pass,
    Fail,
    /// Not evaluated because the nonnegativity precheck failed.
    Skipped,
}

#[derive(Clone, Debug)]
pub struct AxiomReport<S> {
    pub elements: usize,
    pub ordered_pairs: usize,
    pub violations: Vec<Violation<S>>,
    pub skipped: bool,
    pub witness: Option<GoodPairCertificate<S>>,
}

impl<S: Scalar> AxiomReport<S> {
    pub fn verdict(&self, axiom: Axiom) -> AxiomVerdict {
        if self.skipped && axiom != Axiom::NonNegativity {
            AxiomVerdict::Skipped
        } else if self.violations.iter().any(|v| v.axiom == axiom) {
            AxiomVerdict::Fail
        } else {
            AxiomVerdict::Pass
        }
    }

    pub fn passes(&self, axiom: Axiom) -> bool {
        self.verdict(axiom) == AxiomVerdict::Pass
    }

    pub fn all_pass(&self) -> bool {
        Axiom::ALL.iter().all(|&a| self.passes(a))
    }

    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation<S>> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }
}

fn frac<S: Scalar>(x: &S) -> String {
    x.to_fraction()
}

/// Checks Axioms I–VI on the finite set `elements`, which must contain the
/// identity. Pairwise axioms run over all ordered pairs of distinct
/// elements; the Axiom VI witness is the first good pair in canonical order.
pub fn check_axioms<S: Scalar, O: LengthOracle<S> + ?Sized>(
    o: &O,
    elements: &[Word],
) -> Result<AxiomReport<S>> {
    for w in elements {
        o.alphabet().check(w)?;
    }
    let mut set: Vec<Word> = elements.to_vec();
    set.sort();
    set.dedup();
    if set.first().is_none_or(|w| !w.is_identity()) {
        return Err(Error::Precondition("the element set must contain the identity".into()));
    }
    let n = set.len();
    let values: Vec<S> = set.par_iter().map(|w| o.eval(w)).collect();
    let ordered_pairs = n * (n - 1);

    let mut violations = Vec::new();
    for (w, v) in set.iter().zip(&values) {
        if *v < S::zero() {
            violations.push(Violation {
                axiom: Axiom::NonNegativity,
                words: vec![w.clone()],
                values: vec![v.clone()],
                detail: format!("ℓ = {} < 0", frac(v)),
            });
        }
    }
    if !violations.is_empty() {
        return Ok(AxiomReport {
            elements: n,
            ordered_pairs,
            violations,
            skipped: true,
            witness: None,
        });
    }

    if !values[0].is_zero() {
        violations.push(Violation {
            axiom: Axiom::I,
            words: vec![Word::identity()],
            values: vec![values[0].clone()],
            detail: format!("ℓ(1) = {} ≠ 0", frac(&values[0])),
        });
    }

    let rank = o.alphabet().rank() as u32;
    let letters: Vec<Word> = (0..rank)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .map(|l| Word::reduce([l]))
        .collect();
    let pointwise: Vec<Violation<S>> = set
        .par_iter()
        .zip(values.par_iter())
        .flat_map_iter(|(w, v)| {
            let mut out = Vec::new();
            let vi = o.eval(&w.inverse());
            if vi != *v {
                out.push(Violation {
                    axiom: Axiom::II,
                    words: vec![w.clone()],
                    values: vec![v.clone(), vi.clone()],
                    detail: format!("ℓ(g) = {} ≠ ℓ(g⁻¹) = {}", frac(v), frac(&vi)),
                });
            }
            for x in &letters {
                let c = w.conjugate(x);
                let vc = o.eval(&c);
                if vc != *v {
                    out.push(Violation {
                        axiom: Axiom::III,
                        words: vec![w.clone(), x.clone()],
                        values: vec![v.clone(), vc.clone()],
                        detail: format!("ℓ(g) = {} ≠ ℓ(hgh⁻¹) = {}", frac(v), frac(&vc)),
                    });
                }
            }
            out
        })
        .collect();
    violations.extend(pointwise);

    // One pass over ordered pairs: Axioms IV and V, plus the earliest VI pair.
    let rows: Vec<(Vec<Violation<S>>, Option<((usize, usize, usize), S, S)>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let g = &set[i];
            let mut out = Vec::new();
            let mut best: Option<((usize, usize, usize), S, S)> = None;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let h = &set[j];
                let (lg, lh) = (&values[i], &values[j]);
                let p = o.eval(&g.concat(h));
                let m = o.eval(&g.concat(&h.inverse()));
                let sum = lg.clone() + lh.clone();
                let mx = max_of(p.clone(), m.clone());
                let vals = || vec![lg.clone(), lh.clone(), p.clone(), m.clone()];
                if p != m && mx > sum {
                    out.push(Violation {
                        axiom: Axiom::IV,
                        words: vec![g.clone(), h.clone()],
                        values: vals(),
                        detail: format!(
                            "ℓ(gh) = {} ≠ ℓ(gh⁻¹) = {} and max > ℓ(g) + ℓ(h) = {}",
                            frac(&p),
                            frac(&m),
                            frac(&sum)
                        ),
                    });
                }
                if lg > &S::zero() && lh > &S::zero() {
                    let disjoint = p == m && p > sum;
                    if !disjoint && mx != sum {
                        out.push(Violation {
                            axiom: Axiom::V,
                            words: vec![g.clone(), h.clone()],
                            values: vals(),
                            detail: format!(
                                "max(ℓ(gh), ℓ(gh⁻¹)) = {} ≠ ℓ(g) + ℓ(h) = {} and not ℓ(gh) = ℓ(gh⁻¹) > ℓ(g) + ℓ(h)",
                                frac(&mx),
                                frac(&sum)
                            ),
                        });
                    }
                    let key = pair_key(g, h, i, j);
                    if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                        let s = sum.clone() - m.clone();
                        let two_min = min_of(lg.clone(), lh.clone()) * (S::one() + S::one());
                        if s > S::zero() && s < two_min {
                            best = Some((key, p.clone(), m.clone()));
                        }
                    }
                }
            }
            (out, best)
        })
        .collect();
    let mut best: Option<((usize, usize, usize), S, S)> = None;
    for (out, b) in rows {
        violations.extend(out);
        if let Some(b) = b {
            if best.as_ref().is_none_or(|x| b.0 < x.0) {
                best = Some(b);
            }
        }
    }
    let witness = best.map(|((_, i, j), p, m)| {
        GoodPairCertificate::from_values(
            o.provenance(),
            set[i].clone(),
            set[j].clone(),
            values[i].clone(),
            values[j].clone(),
            p,
            m,
        )
    });
    if witness.is_none() {
        violations.push(Violation {
            axiom: Axiom::VI,
            words: Vec::new(),
            values: Vec::new(),
            detail: format!("no pair among {n} elements satisfies 0 < ℓ(g)+ℓ(h)−ℓ(gh⁻¹) < 2 min"),
        });
    }
    Ok(AxiomReport {
        elements: n,
        ordered_pairs,
        violations,
        skipped: false,
        witness,
    })
}
