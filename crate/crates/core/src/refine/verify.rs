use rayon::prelude::*;

use super::metric::{integer_matrix, OrbitMetric};
use super::tree::FiniteTree;
use crate::error::{Error, Result};
use crate::lfcore::{DaggerOracle, LengthOracle, SimultaneousGoodPair};
use crate::scalar::Scalar;
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefinementViolation {
    /// `d_T(x, y) ≠ d_A(x, y) + d_B(x, y)`.
    L1 { x: usize, y: usize },
    /// `z` lies on the `T`-geodesic `[x, y]` but not on the one in `which`.
    Alignment { x: usize, y: usize, z: usize, which: char },
    /// A tree edge whose sides are not separated in either factor.
    Collapse { edge: usize },
}

#[derive(Clone, Debug)]
pub struct RefinementReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<RefinementViolation>,
}

impl RefinementReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the ℓ₁ identity, alignment and absence of collapses for a tree
/// built from the summed based oracle at `gp`.
pub fn verify_refinement<S, L, M>(
    l: &L,
    m: &M,
    gp: &SimultaneousGoodPair<S>,
    built: &FiniteTree<S>,
) -> Result<RefinementReport>
where
    S: Scalar,
    L: LengthOracle<S>,
    M: LengthOracle<S>,
{
    let pa = DaggerOracle::new(l, &gp.for_l)?;
    let pb = DaggerOracle::new(m, &gp.for_m)?;
    let sample: &[Word] = &built.sample;
    let da = OrbitMetric::compute(&pa, sample)?.d;
    let db = OrbitMetric::compute(&pb, sample)?.d;
    let dt = built.sample_distances();
    let n = sample.len();

    let mut violations = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if dt[x][y] != da[x][y].clone() + db[x][y].clone() {
                violations.push(RefinementViolation::L1 { x, y });
            }
        }
    }

    let mats = [&dt, &da, &db].map(|d| integer_matrix(d));
    let alignment: Vec<RefinementViolation> = match mats {
        [Some(t), Some(a), Some(b)] => (0..n)
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut out = Vec::new();
                for y in x + 1..n {
                    for z in 0..n {
                        if t[x][z] + t[z][y] != t[x][y] {
                            continue;
                        }
                        if a[x][z] + a[z][y] != a[x][y] {
                            out.push(RefinementViolation::Alignment { x, y, z, which: 'A' });
                        }
                        if b[x][z] + b[z][y] != b[x][y] {
                            out.push(RefinementViolation::Alignment { x, y, z, which: 'B' });
                        }
                    }
                }
                out
            })
            .collect(),
        _ => {
            let between = |d: &Vec<Vec<S>>, x: usize, y: usize, z: usize| {
                d[x][z].clone() + d[z][y].clone() == d[x][y]
            };
            let mut out = Vec::new();
            for x in 0..n {
                for y in x + 1..n {
                    for z in 0..n {
                        if !between(&dt, x, y, z) {
                            continue;
                        }
                        if !between(&da, x, y, z) {
                            out.push(RefinementViolation::Alignment { x, y, z, which: 'A' });
                        }
                        if !between(&db, x, y, z) {
                            out.push(RefinementViolation::Alignment { x, y, z, which: 'B' });
                        }
                    }
                }
            }
            out
        }
    };
    violations.extend(alignment);

    // Each edge separates some pair of sample points that A or B separates.
    for (k, (side, _)) in built.splits().iter().enumerate() {
        let inside: Vec<bool> = (0..n).map(|i| side.binary_search(&i).is_ok()).collect();
        let separated = (0..n).any(|x| {
            inside[x]
                && (0..n).any(|y| {
                    !inside[y] && da[x][y].clone() + db[x][y].clone() > S::zero()
                })
        });
        if !separated {
            violations.push(RefinementViolation::Collapse { edge: k });
        }
    }

    Ok(RefinementReport {
        pairs_checked: n * n.saturating_sub(1) / 2,
        triples_checked: n * n.saturating_sub(1) / 2 * n,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplacementRow<S> {
    pub word: Word,
    pub based: S,
    pub translation: S,
    /// `(P(g) − ℓ(g)) / 2`: the distance from the base point to the axis.
    pub to_axis: S,
}

#[derive(Clone, Debug)]
pub struct DisplacementReport<S> {
    pub rows: Vec<DisplacementRow<S>>,
    /// Words with `P(g) < ℓ(g)`.
    pub violations: Vec<Word>,
}

impl<S: Scalar> DisplacementReport<S> {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// Words whose axis passes through the base point.
    pub fn on_axis(&self) -> impl Iterator<Item = &Word> {
        self.rows.iter().filter(|r| r.to_axis.is_zero()).map(|r| &r.word)
    }
}

/// Checks `P(g) = ℓ(g) + 2·d(p, C_g)` with a nonnegative distance.
pub fn displacement_check<S, T, P>(lm: &T, p: &P, sample: &[Word]) -> Result<DisplacementReport<S>>
where
    S: Scalar,
    T: LengthOracle<S> + ?Sized,
    P: LengthOracle<S> + ?Sized,
{
    if lm.alphabet() != p.alphabet() {
        return Err(Error::AlphabetMismatch("translation and based oracles differ".into()));
    }
    let rows: Vec<DisplacementRow<S>> = sample
        .iter()
        .map(|w| {
            let based = p.checked_eval(w)?;
            let translation = lm.checked_eval(w)?;
            let to_axis = (based.clone() - translation.clone()).half();
            Ok(DisplacementRow {
                word: w.clone(),
                based,
                translation,
                to_axis,
            })
        })
        .collect::<Result<_>>()?;
    let violations = rows
        .iter()
        .filter(|r| r.to_axis < S::zero())
        .map(|r| r.word.clone())
        .collect();
    Ok(DisplacementReport { rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfcore::{simultaneous_good_pair, sum_oracle};
    use crate::mgraph::presets::{barbell, rose};
    use crate::refine::{build_tree, orbit_metric};
    use crate::words::{enumerate_words, Alphabet};
    use crate::Rational;

    #[test]
    fn compatible_pair_refines() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let bb = barbell::<Rational>();
        let gp = simultaneous_good_pair(&bb, &r, 4).unwrap().unwrap();
        let sum = sum_oracle(&bb, &r).unwrap();
        let p = DaggerOracle::new(&sum, &gp.for_sum).unwrap();
        let sample: Vec<Word> = enumerate_words(2, 2).collect();
        let om = orbit_metric(&p, &sample).unwrap();
        let t = build_tree(&om).unwrap();
        let rep = verify_refinement(&bb, &r, &gp, &t).unwrap();
        assert!(rep.passes(), "{:?}", rep.violations.first());
        let disp = displacement_check(&sum, &p, &sample).unwrap();
        assert!(disp.passes());
        assert!(disp.on_axis().any(|w| w.is_identity()));
    }

    #[test]
    fn same_tree_twice_doubles() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let gp = simultaneous_good_pair(&r, &r, 3).unwrap().unwrap();
        let single = DaggerOracle::new(&r, &gp.for_l).unwrap();
        let sum = sum_oracle(&r, &r).unwrap();
        let p = DaggerOracle::new(&sum, &gp.for_sum).unwrap();
        let sample: Vec<Word> = enumerate_words(2, 2).collect();
        let om = orbit_metric(&p, &sample).unwrap();
        let one = orbit_metric(&single, &sample).unwrap();
        for i in 0..om.len() {
            for j in 0..om.len() {
                assert_eq!(om.d[i][j], one.d[i][j] * Rational::from_integer(2));
            }
        }
        let t = build_tree(&om).unwrap();
        assert!(verify_refinement(&r, &r, &gp, &t).unwrap().passes());
    }
}
